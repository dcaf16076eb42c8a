// Writes the generated care-robot fixtures into the given directory.

#include <iostream>
#include <string>

#include "argdec/argdec.hpp"

int main(int argc, char** argv) {
  using namespace argdec;
  if (argc != 2) {
    std::cerr << "usage: make_fixtures DIR\n";
    return 2;
  }
  const std::string dir = argv[1];
  const auto f = robot::build_dilemma_fixture();
  write_file(dir + "/care_robot.json", serialize_scenario(robot::decision_scenario(robot::RobotParams{})));
  write_file(dir + "/care_robot_dilemma.json", serialize_scenario(f.scenario));
  write_file(dir + "/care_robot_dilemma.knowledge.json", knowledge_to_json(f.knowledge).dump(2) + "\n");
  write_file(dir + "/care_robot_dilemma.world.json",
             knowledge_to_json(full_knowledge(f.world, f.scenario.variables)).dump(2) + "\n");
  return 0;
}
