#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "maskprompt/error.hpp"
#include "maskprompt/prompting.hpp"

namespace maskprompt {
namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void schema_error(const std::string& what) {
    throw Error(ErrorKind::Schema, "prompt set schema: " + what);
}

int require_int(const ordered_json& obj, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) schema_error(std::string("missing key '") + key + "'");
    if (!it->is_number_integer()) schema_error(std::string("'") + key + "' must be an integer");
    const auto v = it->get<std::int64_t>();
    if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
        schema_error(std::string("'") + key + "' out of range");
    }
    return static_cast<int>(v);
}

}  // namespace

std::string to_json(const PromptSet& prompts) {
    ordered_json doc;
    doc["image"] = prompts.source_image;
    doc["width"] = prompts.width;
    doc["height"] = prompts.height;
    auto points = ordered_json::array();
    for (const auto& p : prompts.points) {
        ordered_json point;
        point["x"] = p.x;
        point["y"] = p.y;
        point["label"] = static_cast<int>(p.label);
        points.push_back(std::move(point));
    }
    doc["points"] = std::move(points);
    if (!prompts.config_digest.empty()) doc["config_digest"] = prompts.config_digest;
    return doc.dump(2) + "\n";
}

PromptSet prompt_set_from_json(std::string_view text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        schema_error(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) schema_error("top level must be an object");
    for (const auto& [key, _] : doc.items()) {
        if (key != "image" && key != "width" && key != "height" && key != "points" && key != "config_digest") {
            schema_error("unexpected key '" + key + "'");
        }
    }

    PromptSet out;
    const auto image = doc.find("image");
    if (image == doc.end() || !image->is_string()) schema_error("'image' must be a string");
    out.source_image = image->get<std::string>();
    out.width = require_int(doc, "width");
    out.height = require_int(doc, "height");
    if (out.width < 1 || out.height < 1) schema_error("'width' and 'height' must be >= 1");
    if (const auto digest = doc.find("config_digest"); digest != doc.end()) {
        if (!digest->is_string()) schema_error("'config_digest' must be a string");
        out.config_digest = digest->get<std::string>();
    }

    const auto points = doc.find("points");
    if (points == doc.end() || !points->is_array()) schema_error("'points' must be an array");
    std::set<std::tuple<int, int, int>> seen;
    for (const auto& p : *points) {
        if (!p.is_object() || p.size() != 3) schema_error("each point must be {x, y, label}");
        const int x = require_int(p, "x");
        const int y = require_int(p, "y");
        const int label = require_int(p, "label");
        if (label != 0 && label != 1) schema_error("label must be 0 or 1, got " + std::to_string(label));
        if (x < 0 || y < 0 || x >= out.width || y >= out.height) {
            schema_error("point (" + std::to_string(x) + ", " + std::to_string(y) + ") outside image");
        }
        if (!seen.emplace(x, y, label).second) schema_error("duplicate point");
        const auto lab = label == 1 ? PromptLabel::Positive : PromptLabel::Negative;
        out.points.push_back({x, y, lab});
        (lab == PromptLabel::Positive ? out.n_positive : out.n_negative) += 1;
    }
    return out;
}

PromptSet load_prompt_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::FileNotFound, "no such file: " + path);
    const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return prompt_set_from_json(text);
}

void save_prompt_set(const PromptSet& prompts, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
    out << to_json(prompts);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
}

}  // namespace maskprompt
