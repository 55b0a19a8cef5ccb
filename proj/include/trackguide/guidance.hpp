#ifndef TRACKGUIDE_GUIDANCE_HPP
#define TRACKGUIDE_GUIDANCE_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string_view>

#include "trackguide/geometry.hpp"

namespace trackguide {

/// The five direction instructions, plus Stop for the case where every
/// candidate path is blocked.
enum class DirectionCommand {
    Forward,
    LeftForward,
    RightForward,
    TurnLeft,
    TurnRight,
    Stop,
};

/// Frontal-sector boundaries for mapping planned yaw to a command.
struct SectorConfig {
    double forward_half_angle = deg2rad(5.0);  // rad
    double slight_turn_limit = deg2rad(20.0);  // rad

    void validate() const {
        if (!(forward_half_angle > 0.0 && forward_half_angle < slight_turn_limit &&
              slight_turn_limit < std::numbers::pi / 2.0)) {
            throw std::invalid_argument(
                "SectorConfig: need 0 < forward_half_angle < slight_turn_limit < pi/2");
        }
    }
};

/// Discretize a planned yaw (body frame, (-pi, pi]) into one of the five
/// direction instructions. Sector boundaries belong to the gentler command.
inline DirectionCommand command_from_yaw(double yaw, const SectorConfig& sectors) {
    if (!std::isfinite(yaw)) {
        throw std::invalid_argument("command_from_yaw: yaw must be finite");
    }
    const double a = std::abs(yaw);
    if (a <= sectors.forward_half_angle) return DirectionCommand::Forward;
    if (a <= sectors.slight_turn_limit) {
        return yaw > 0.0 ? DirectionCommand::LeftForward : DirectionCommand::RightForward;
    }
    return yaw > 0.0 ? DirectionCommand::TurnLeft : DirectionCommand::TurnRight;
}

/// Stable one-word token per command; exactly one is emitted per frame.
inline std::string_view emit(DirectionCommand command) {
    switch (command) {
        case DirectionCommand::Forward: return "forward";
        case DirectionCommand::LeftForward: return "left-forward";
        case DirectionCommand::RightForward: return "right-forward";
        case DirectionCommand::TurnLeft: return "turn-left";
        case DirectionCommand::TurnRight: return "turn-right";
        case DirectionCommand::Stop: return "stop";
    }
    throw std::invalid_argument("emit: unknown command");
}

}  // namespace trackguide

#endif  // TRACKGUIDE_GUIDANCE_HPP
