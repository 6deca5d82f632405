#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "berktree/resloc.hpp"

namespace berktree::cli {

using nlohmann::json;

// Exact encodings. Rational scalars are written as literals; others carry
// their raw digits so that a reader with the same tower reproduces them bit
// for bit. "text" fields are for humans.
json tower_json(const FieldTower& T);
std::shared_ptr<FieldTower> tower_from_json(const json& j);

json scalar_json(const Scalar& x);
Scalar scalar_from_json(FieldTower& T, const json& j);

json point_json(const BerkPoint& x);
BerkPoint point_from_json(FieldTower& T, const json& j);

json tree_json(const DynTree& t);
// Rebuilds the tree by inserting the stored points in node order.
DynTree tree_from_json(FieldTower& T, const json& j);

json measure_json(const DynTree& t, const TreeMeasure& m);
json barycenter_json(const DynTree& t, const BarycenterResult& bc);

json depth_json(const DepthReport& r);
json minresloc_json(const MinResLocResult& r);
json equidist_json(const EquidistReport& r);
std::string equidist_csv(const EquidistReport& r);

}  // namespace berktree::cli
