#ifndef ELFE_REPORT_JSON_HPP_
#define ELFE_REPORT_JSON_HPP_

#include <json.hpp>

#include "elfe/pipeline.hpp"

namespace elfe {

nlohmann::ordered_json model_json(const Model& m);
nlohmann::ordered_json obligation_json(const CheckedObligation& c);
nlohmann::ordered_json report_object(const VerifyResult& result);

}  // namespace elfe

#endif  // ELFE_REPORT_JSON_HPP_
