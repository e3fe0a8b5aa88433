#pragma once

// JSON interchange for submanifolds, boundary curves and flow trajectories.
//
// Submanifold schema:
//   {"model": "poincare_ball", "ambient_dim": d, "submanifold_dim": n,
//    "kind": "curve" | "trimesh" | "sphere" | "disk",
//    "vertices": [[...], ...], "elements": [[i, j, k], ...], "closed": bool,
//    "center": [...], "radius": r,
//    "base": [...], "frame": [[column], ...], "truncation": r | null}
// Boundary schema: {"points": [[unit vector], ...], "closed": true}
// Trajectory schema: [{"time": t, "submanifold": {...}}, ...]

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hypent/boundary.hpp"
#include "hypent/flow.hpp"
#include "hypent/manifolds.hpp"

namespace hypent {

/// File could not be opened or written.
class FileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Well-formed file whose content violates a schema. Geometric validation
/// failures from constructors surface as std::invalid_argument.
class SchemaError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& text);

Submanifold parse_submanifold(const std::string& json_text);
std::string submanifold_to_json(const Submanifold& s, int indent = -1);
Submanifold read_submanifold(const std::string& path);

BoundaryCurve parse_boundary(const std::string& json_text);
std::string boundary_to_json(const BoundaryCurve& g, int indent = -1);
BoundaryCurve read_boundary(const std::string& path);

std::string trajectory_to_json(const std::vector<FlowState>& traj, int indent = -1);
std::vector<FlowState> parse_trajectory(const std::string& json_text);

}  // namespace hypent
