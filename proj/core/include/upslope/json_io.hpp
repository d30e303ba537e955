#pragma once

#include <json.hpp>
#include <string>

#include "upslope/duality.hpp"
#include "upslope/quat.hpp"
#include "upslope/spectral.hpp"
#include "upslope/upmat.hpp"

namespace upslope {

using Json = nlohmann::ordered_json;

Json ctx_to_json(const PadicContext* ctx);
CtxPtr ctx_from_json(const Json& j);

Json mat_to_json(const Mat& m);                 // context + rows of cyclo literals
Mat mat_from_json(const Json& j, CtxPtr& ctx);  // ctx returned through the out-param

Json quat_to_json(const Quaternion& q);
Quaternion quat_from_json(const Json& j);

Json recipe_to_json(const UpRecipe& r);
UpRecipe recipe_from_json(const Json& j, const PadicContext* ctx);

Json polygon_to_json(const PolygonData& p);
Json slopes_to_json(const std::vector<std::pair<Rat, bool>>& slopes);
std::string slopes_to_csv(const std::vector<std::pair<Rat, bool>>& slopes);

Json charseries_to_json(const CharSeries& cs);

Json weight_to_json(const WeightChar& w);
WeightChar weight_from_json(const Json& j, const PadicContext* ctx);

Json dirichlet_to_json(const DirichletCharacter& chi);
DirichletCharacter dirichlet_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace upslope
