#pragma once

#include <cstdint>
#include <limits>

namespace vanetflow::traffic {

inline constexpr double kNoVehicle = std::numeric_limits<double>::infinity();

// IDM + MOBIL parameters for one driver. Units are SI throughout.
struct DriverParams {
  double max_accel = 0.73;          // a
  double comfortable_brake = 1.67;  // b
  double desired_velocity = 33.33;  // v0
  double time_headway = 1.6;        // T
  double min_gap = 2.0;             // s0
  double accel_exponent = 4.0;      // delta
  double politeness = 0.2;          // p
  double change_threshold = 0.3;
  // Added to the incentive of changes that leave the slow lane; negative
  // values keep drivers in the slow lane.
  double lane_bias = -0.1;
  double diff_cap = 20.0;
  double vsl_reduction = 2.7;
  // Lane-change veto: no change may force anyone to brake harder than this.
  double safe_brake = 4.0;

  // Throws ConfigError naming the first violated field.
  void validate() const;

  bool operator==(const DriverParams&) const = default;
};

// What a vehicle sees of one lane: the nearest vehicle ahead and behind.
// Gaps are bumper-to-bumper; kNoVehicle marks an empty side.
struct Neighborhood {
  double leader_gap = kNoVehicle;
  double leader_velocity = 0.0;
  double follower_gap = kNoVehicle;
  double follower_velocity = 0.0;
};

struct VehicleState {
  std::uint64_t id = 0;
  int lane = 0;
  double position = 0.0;  // front bumper, metres from the field origin
  double velocity = 0.0;
  double length = 5.0;
  bool infected = false;
  bool passed_obstacle = false;
  DriverParams params{};
};

enum class LaneChangeVariant { kBase, kBruteForce, kProportional };

enum class LaneChangeRule {
  kMultiplicative,  // (incentive - p) * oth > thresh
  kMobilAdditive,   // incentive + p * oth > thresh
};

enum class LaneDirection { kToSlowLane, kToFastLane };

double desired_gap(double v, double delta_v, const DriverParams& p);

// IDM acceleration. `gap` may be kNoVehicle for a free road. A finite
// gap <= 0 is a collision state and throws DomainError.
double idm_acceleration(double v, double gap, double delta_v,
                        const DriverParams& p);

// Same, with the desired velocity replaced (variable speed limit).
double idm_acceleration(double v, double gap, double delta_v,
                        const DriverParams& p, double desired_velocity);

// Acceleration against the leader described by `lane`.
double lane_acceleration(double v, const Neighborhood& lane,
                         const DriverParams& p, double desired_velocity);

double my_advantage(const Neighborhood& current, const Neighborhood& target,
                    double v, const DriverParams& p,
                    LaneDirection direction = LaneDirection::kToFastLane);

// Net acceleration change of the two affected followers caused by the move:
// (old-lane follower, now behind my leader) + (new-lane follower, now
// behind me). Negative when the change forces followers to brake.
// Followers are assumed to drive with the mover's parameters.
double others_disadvantage(const Neighborhood& current,
                           const Neighborhood& target,
                           const VehicleState& mover);

bool lane_change_criterion(double incentive, double oth_dis,
                           const DriverParams& p, LaneChangeRule rule);

bool base_lane_change(double my_adv, double oth_dis, const DriverParams& p,
                      LaneChangeRule rule = LaneChangeRule::kMultiplicative);

bool brute_force_lane_change(
    double my_adv, double boost, double oth_dis, const DriverParams& p,
    LaneChangeRule rule = LaneChangeRule::kMultiplicative);

// min(diff_cap, pos_obst / (pos_obst - pos_me)). Throws DomainError
// unless the vehicle is upstream of the obstacle.
double diff_incentive(double pos_me, double pos_obst, const DriverParams& p);

bool proportional_lane_change(
    double my_adv, double diff, double oth_dis, const DriverParams& p,
    LaneChangeRule rule = LaneChangeRule::kMultiplicative);

// Safety veto for moving into `target`: the rear gap must be at least s0
// and neither the mover nor the new follower may need to brake harder
// than safe_brake.
bool lane_change_safe(const Neighborhood& target, const VehicleState& mover);

double effective_desired_velocity(const VehicleState& vehicle,
                                  bool vsl_enabled);

VehicleState integrate_kinematics(const VehicleState& vehicle, double accel,
                                  double dt);

}  // namespace vanetflow::traffic
