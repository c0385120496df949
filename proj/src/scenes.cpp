#include "sgrasp/scenes.hpp"

namespace sgrasp {

Scene cubePalmScene(double side, double mu_hand, double mu_env) {
  Scene s;
  s.char_length = side;
  s.object_pose = {0, -side / 2, 0};
  const double h = side / 2;
  s.contacts = {
      {Owner::kEnvironment, {-h, -side}, {0, 1}, mu_env},
      {Owner::kEnvironment, {h, -side}, {0, 1}, mu_env},
      {Owner::kHand, {-h, 0}, {0, -1}, mu_hand},
      {Owner::kHand, {h, 0}, {0, -1}, mu_hand},
  };
  return s;
}

Scene fingerBlockScene(double width, double height, double offset,
                       double mu_finger, double mu_env) {
  Scene s;
  s.char_length = width;
  const double left = -offset;
  s.object_pose = {left + width / 2, -height / 2, 0};
  s.contacts = {
      {Owner::kEnvironment, {left + width, -height}, {0, 1}, mu_env},
      {Owner::kEnvironment, {left, -height}, {0, 1}, mu_env},
      {Owner::kHand, {0, 0}, {0, -1}, mu_finger},
  };
  return s;
}

std::vector<Eigen::Vector2d> fingerBlockPath(double width, double height,
                                             double offset) {
  const double left = -offset;
  return {{left + width, -height}, {left + width, 0}, {left, 0}};
}

}  // namespace sgrasp
