#include "traffic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace vanetflow::traffic {

namespace {

void require(bool ok, const char* key, const char* constraint, double value) {
  if (!ok) {
    throw ConfigError(key, std::string(key) + " must be " + constraint +
                               " (got " + std::to_string(value) + ")");
  }
}

}  // namespace

void DriverParams::validate() const {
  require(max_accel > 0, "max_accel", "> 0", max_accel);
  require(comfortable_brake > 0, "comfortable_brake", "> 0",
          comfortable_brake);
  require(desired_velocity > 0, "desired_velocity", "> 0", desired_velocity);
  require(time_headway >= 0, "time_headway", ">= 0", time_headway);
  require(min_gap >= 0, "min_gap", ">= 0", min_gap);
  require(accel_exponent > 0, "accel_exponent", "> 0", accel_exponent);
  require(politeness >= 0, "politeness", ">= 0", politeness);
  require(change_threshold > 0, "change_threshold", "> 0", change_threshold);
  require(diff_cap > 0, "diff_cap", "> 0", diff_cap);
  require(vsl_reduction >= 0, "vsl_reduction", ">= 0", vsl_reduction);
  require(safe_brake > 0, "safe_brake", "> 0", safe_brake);
}

double desired_gap(double v, double delta_v, const DriverParams& p) {
  const double dynamic =
      v * p.time_headway +
      v * delta_v / (2.0 * std::sqrt(p.max_accel * p.comfortable_brake));
  return p.min_gap + std::max(0.0, dynamic);
}

double idm_acceleration(double v, double gap, double delta_v,
                        const DriverParams& p) {
  return idm_acceleration(v, gap, delta_v, p, p.desired_velocity);
}

double idm_acceleration(double v, double gap, double delta_v,
                        const DriverParams& p, double desired_velocity) {
  double interaction = 0.0;
  if (!std::isinf(gap)) {
    if (!(gap > 0.0)) {
      throw DomainError("idm_acceleration: non-positive gap " +
                        std::to_string(gap) + " to leader");
    }
    const double ratio = desired_gap(v, delta_v, p) / gap;
    interaction = ratio * ratio;
  }
  if (desired_velocity <= 0.0) {
    // Desired speed reduced to zero: brake comfortably until stopped.
    return v > 0.0 ? -p.comfortable_brake
                   : std::min(0.0, -p.max_accel * interaction);
  }
  const double free_term = std::pow(v / desired_velocity, p.accel_exponent);
  return p.max_accel * (1.0 - free_term - interaction);
}

double lane_acceleration(double v, const Neighborhood& lane,
                         const DriverParams& p, double desired_velocity) {
  return idm_acceleration(v, lane.leader_gap, v - lane.leader_velocity, p,
                          desired_velocity);
}

double my_advantage(const Neighborhood& current, const Neighborhood& target,
                    double v, const DriverParams& p, LaneDirection direction) {
  const double a_old = lane_acceleration(v, current, p, p.desired_velocity);
  const double a_new = lane_acceleration(v, target, p, p.desired_velocity);
  const double bias =
      direction == LaneDirection::kToFastLane ? p.lane_bias : 0.0;
  return a_new - a_old + bias;
}

double others_disadvantage(const Neighborhood& current,
                           const Neighborhood& target,
                           const VehicleState& mover) {
  const DriverParams& p = mover.params;
  double change = 0.0;

  if (!std::isinf(current.follower_gap)) {
    const double vf = current.follower_velocity;
    const double before =
        idm_acceleration(vf, current.follower_gap, vf - mover.velocity, p);
    // Once the mover leaves, the follower closes up on the mover's leader.
    double after = idm_acceleration(vf, kNoVehicle, 0.0, p);
    if (!std::isinf(current.leader_gap)) {
      const double gap =
          current.follower_gap + mover.length + current.leader_gap;
      after = idm_acceleration(vf, gap, vf - current.leader_velocity, p);
    }
    change += after - before;
  }

  if (!std::isinf(target.follower_gap)) {
    const double vf = target.follower_velocity;
    double before = idm_acceleration(vf, kNoVehicle, 0.0, p);
    if (!std::isinf(target.leader_gap)) {
      const double gap = target.follower_gap + mover.length + target.leader_gap;
      before = idm_acceleration(vf, gap, vf - target.leader_velocity, p);
    }
    const double after =
        target.follower_gap > 0.0
            ? idm_acceleration(vf, target.follower_gap, vf - mover.velocity, p)
            : -std::numeric_limits<double>::infinity();
    change += after - before;
  }
  return change;
}

bool lane_change_criterion(double incentive, double oth_dis,
                           const DriverParams& p, LaneChangeRule rule) {
  switch (rule) {
    case LaneChangeRule::kMultiplicative:
      return (incentive - p.politeness) * oth_dis > p.change_threshold;
    case LaneChangeRule::kMobilAdditive:
      return incentive + p.politeness * oth_dis > p.change_threshold;
  }
  return false;
}

bool base_lane_change(double my_adv, double oth_dis, const DriverParams& p,
                      LaneChangeRule rule) {
  return lane_change_criterion(my_adv, oth_dis, p, rule);
}

bool brute_force_lane_change(double my_adv, double boost, double oth_dis,
                             const DriverParams& p, LaneChangeRule rule) {
  return lane_change_criterion(my_adv + boost, oth_dis, p, rule);
}

double diff_incentive(double pos_me, double pos_obst, const DriverParams& p) {
  if (!(pos_me < pos_obst) || !(pos_obst > 0.0)) {
    throw DomainError("diff_incentive: vehicle at " + std::to_string(pos_me) +
                      " is not upstream of obstacle at " +
                      std::to_string(pos_obst));
  }
  return std::min(p.diff_cap, pos_obst / (pos_obst - pos_me));
}

bool proportional_lane_change(double my_adv, double diff, double oth_dis,
                              const DriverParams& p, LaneChangeRule rule) {
  return lane_change_criterion(my_adv + diff, oth_dis, p, rule);
}

bool lane_change_safe(const Neighborhood& target, const VehicleState& mover) {
  const DriverParams& p = mover.params;
  if (!std::isinf(target.follower_gap)) {
    if (target.follower_gap < p.min_gap) return false;
    const double vf = target.follower_velocity;
    const double a_follower =
        idm_acceleration(vf, target.follower_gap, vf - mover.velocity, p);
    if (a_follower < -p.safe_brake) return false;
  }
  if (!std::isinf(target.leader_gap)) {
    if (!(target.leader_gap > 0.0)) return false;
    const double a_self =
        idm_acceleration(mover.velocity, target.leader_gap,
                         mover.velocity - target.leader_velocity, p);
    if (a_self < -p.safe_brake) return false;
  }
  return true;
}

double effective_desired_velocity(const VehicleState& vehicle,
                                  bool vsl_enabled) {
  const DriverParams& p = vehicle.params;
  if (vsl_enabled && vehicle.infected && !vehicle.passed_obstacle) {
    return std::max(0.0, p.desired_velocity - p.vsl_reduction);
  }
  return p.desired_velocity;
}

VehicleState integrate_kinematics(const VehicleState& vehicle, double accel,
                                  double dt) {
  VehicleState next = vehicle;
  const double v = vehicle.velocity;
  next.velocity = std::max(0.0, v + accel * dt);
  next.position += std::max(0.0, v * dt + 0.5 * accel * dt * dt);
  return next;
}

}  // namespace vanetflow::traffic
