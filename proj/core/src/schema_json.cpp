#include "apicompose/spec_model.hpp"

namespace apicompose {

Json schema_to_json(const SchemaNode& schema) {
    Json j = Json::object();
    if (schema.cycle_marker) {
        j["description"] = schema.description.value_or("recursive reference to " + *schema.cycle_marker);
        j["x-recursive"] = *schema.cycle_marker;
        return j;
    }
    switch (schema.kind) {
        case SchemaKind::any:
            break;
        case SchemaKind::composite: {
            Json alts = Json::array();
            for (const auto& alt : schema.composite_of) alts.push_back(schema_to_json(alt));
            j["anyOf"] = std::move(alts);
            break;
        }
        default:
            j["type"] = std::string(to_string(schema.kind));
            break;
    }
    if (schema.description) j["description"] = *schema.description;
    if (schema.kind == SchemaKind::object) {
        Json props = Json::object();
        for (const auto& [name, prop] : schema.properties) props[name] = schema_to_json(prop);
        j["properties"] = std::move(props);
        if (!schema.required.empty()) {
            j["required"] = Json(std::vector<std::string>(schema.required.begin(), schema.required.end()));
        }
    }
    if (schema.kind == SchemaKind::array && schema.items) j["items"] = schema_to_json(*schema.items);
    if (schema.enum_values) j["enum"] = Json(*schema.enum_values);
    if (schema.example) j["example"] = *schema.example;
    return j;
}

}  // namespace apicompose
