// SPDX-License-Identifier: Apache-2.0

#include "jetconvex/io.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace jetconvex {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json parseFile(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    ordered_json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return doc;
}

std::vector<double> toVec(const ordered_json& j, const char* field)
{
    if (!j.is_array())
        throw std::runtime_error(std::string(field) + " must be an array");
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_number())
            throw std::runtime_error(std::string(field) + " must hold numbers");
        v.push_back(e.get<double>());
    }
    return v;
}

ordered_json pointsJson(const JetDataset& ds)
{
    ordered_json pts = ordered_json::array();
    for (const auto& p : ds.points()) {
        ordered_json rec;
        rec["x"] = p.x;
        rec["f"] = p.f;
        rec["g"] = p.g;
        pts.push_back(std::move(rec));
    }
    return pts;
}

std::vector<JetPoint> recordsFromJson(const ordered_json& pts, std::size_t dim)
{
    if (!pts.is_array() || pts.empty())
        throw std::runtime_error("points must be a non-empty array");
    std::vector<JetPoint> records;
    records.reserve(pts.size());
    for (const auto& rec : pts) {
        JetPoint p;
        p.x = toVec(rec.at("x"), "points[].x");
        if (!rec.at("f").is_number())
            throw std::runtime_error("points[].f must be a number");
        p.f = rec.at("f").get<double>();
        p.g = toVec(rec.at("g"), "points[].g");
        if (p.x.size() != dim || p.g.size() != dim)
            throw std::runtime_error("points[] arrays must have length dim");
        records.push_back(std::move(p));
    }
    return records;
}

} // namespace

JetFile readJetFile(const std::string& path)
{
    const ordered_json doc = parseFile(path);
    if (!doc.contains("version") || doc["version"] != 1)
        throw std::runtime_error(path + ": missing or unsupported version (want 1)");
    if (!doc.contains("dim") || !doc["dim"].is_number_unsigned())
        throw std::runtime_error(path + ": missing dim");
    JetFile out;
    out.dim = doc["dim"].get<std::size_t>();
    out.records = recordsFromJson(doc.at("points"), out.dim);
    return out;
}

void writeJetFile(const std::string& path, std::size_t dim,
                  const std::vector<JetPoint>& records)
{
    ordered_json doc;
    doc["version"] = 1;
    doc["dim"] = dim;
    ordered_json pts = ordered_json::array();
    for (const auto& p : records) {
        ordered_json rec;
        rec["x"] = p.x;
        rec["f"] = p.f;
        rec["g"] = p.g;
        pts.push_back(std::move(rec));
    }
    doc["points"] = std::move(pts);
    std::ofstream outFile(path);
    if (!outFile)
        throw std::runtime_error("cannot write " + path);
    outFile << doc.dump(1) << "\n";
}

bool isModelFile(const std::string& path)
{
    const ordered_json doc = parseFile(path);
    return doc.contains("kind") && doc["kind"] == "jetconvex-model";
}

void saveModel(const ExtensionModel& model, const std::string& path)
{
    ordered_json doc;
    doc["version"] = 1;
    doc["kind"] = "jetconvex-model";
    doc["dim"] = model.dataset.dim();
    doc["points"] = pointsJson(model.dataset);

    ordered_json mod;
    mod["degenerate"] = model.modulus.degenerate;
    mod["gradDiameter"] = model.modulus.gradDiameter;
    mod["slopeCap"] = model.modulus.slopeCap;
    ordered_json lines = ordered_json::array();
    for (std::size_t k = 0; k < model.modulus.slopes.size(); ++k)
        lines.push_back({{"slope", model.modulus.slopes[k]},
                         {"intercept", model.modulus.intercepts[k]}});
    mod["lines"] = std::move(lines);
    mod["breakpoints"] = model.modulus.knots;
    // Per-segment quadratic coefficients of the modulus integral:
    // phi(t) = c0 + c1 * t + c2 * t^2 on segment k.
    ordered_json coeffs = ordered_json::array();
    for (std::size_t k = 0; k < model.modulus.slopes.size(); ++k) {
        const double t0 = k == 0 ? 0.0 : model.modulus.knots[k - 1];
        const double phi0 = k == 0 ? 0.0 : model.modulus.phiAtKnot[k - 1];
        const double c1 = model.modulus.intercepts[k];
        const double c2 = 0.5 * model.modulus.slopes[k];
        const double c0 = phi0 - c1 * t0 - c2 * t0 * t0;
        coeffs.push_back({c0, c1, c2});
    }
    mod["phiCoeffs"] = std::move(coeffs);
    doc["modulus"] = std::move(mod);

    doc["domainBox"] = {{"lo", model.domainBox.lo}, {"hi", model.domainBox.hi}};
    doc["candidates"] = model.candidates;
    doc["gValues"] = model.gValues;
    doc["cornerSampled"] = model.cornerSampled;

    ordered_json cfg;
    cfg["lpTol"] = model.config.lpTol;
    cfg["enrichment"] = model.config.enrichment;
    cfg["seed"] = model.config.seed;
    cfg["maxColumns"] = model.config.maxColumns;
    cfg["searchStarts"] = model.config.searchStarts;
    cfg["searchIters"] = model.config.searchIters;
    cfg["nodes"] = model.config.nodes;
    cfg["tMax"] = model.config.tMax;
    cfg["forcedBuild"] = model.config.forcedBuild;
    doc["config"] = std::move(cfg);

    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << doc.dump(1) << "\n";
}

ExtensionModel loadModel(const std::string& path)
{
    const ordered_json doc = parseFile(path);
    if (!doc.contains("kind") || doc["kind"] != "jetconvex-model")
        throw std::runtime_error(path + ": not a model file");
    if (!doc.contains("version") || doc["version"] != 1)
        throw std::runtime_error(path + ": unsupported model version");

    const std::size_t dim = doc.at("dim").get<std::size_t>();
    ExtensionModel model;
    model.dataset = loadDataset(recordsFromJson(doc.at("points"), dim), dim);
    model.slack = computeSlack(model.dataset);

    const auto& mod = doc.at("modulus");
    model.modulus.degenerate = mod.at("degenerate").get<bool>();
    model.modulus.gradDiameter = mod.at("gradDiameter").get<double>();
    model.modulus.slopeCap = mod.at("slopeCap").get<double>();
    for (const auto& line : mod.at("lines")) {
        model.modulus.slopes.push_back(line.at("slope").get<double>());
        model.modulus.intercepts.push_back(line.at("intercept").get<double>());
    }
    model.modulus.knots = toVec(mod.at("breakpoints"), "modulus.breakpoints");
    const auto& coeffs = mod.at("phiCoeffs");
    if (coeffs.size() != model.modulus.slopes.size() ||
        model.modulus.knots.size() + (model.modulus.slopes.empty() ? 0 : 1) !=
            model.modulus.slopes.size())
        throw std::runtime_error(path + ": inconsistent modulus tables");
    model.modulus.phiAtKnot.resize(model.modulus.knots.size());
    for (std::size_t k = 0; k < model.modulus.knots.size(); ++k) {
        const auto c = toVec(coeffs.at(k), "modulus.phiCoeffs[]");
        if (c.size() != 3)
            throw std::runtime_error(path + ": phiCoeffs rows must have 3 entries");
        const double t = model.modulus.knots[k];
        model.modulus.phiAtKnot[k] = c[0] + c[1] * t + c[2] * t * t;
    }

    model.domainBox.lo = toVec(doc.at("domainBox").at("lo"), "domainBox.lo");
    model.domainBox.hi = toVec(doc.at("domainBox").at("hi"), "domainBox.hi");
    for (const auto& c : doc.at("candidates"))
        model.candidates.push_back(toVec(c, "candidates[]"));
    model.gValues = toVec(doc.at("gValues"), "gValues");
    model.cornerSampled = doc.at("cornerSampled").get<bool>();
    if (model.candidates.size() != model.gValues.size())
        throw std::runtime_error(path + ": candidates/gValues size mismatch");

    const auto& cfg = doc.at("config");
    model.config.lpTol = cfg.at("lpTol").get<double>();
    model.config.enrichment = cfg.at("enrichment").get<std::size_t>();
    model.config.seed = cfg.at("seed").get<std::uint64_t>();
    model.config.maxColumns = cfg.at("maxColumns").get<std::size_t>();
    model.config.searchStarts = cfg.at("searchStarts").get<std::size_t>();
    model.config.searchIters = cfg.at("searchIters").get<std::size_t>();
    model.config.nodes = cfg.at("nodes").get<std::size_t>();
    model.config.tMax = cfg.at("tMax").get<double>();
    model.config.forcedBuild = cfg.at("forcedBuild").get<bool>();

    const double checkTol = 1e-12 * model.dataset.dataScale();
    for (std::size_t j = 0; j < model.candidates.size(); ++j) {
        const double g = smoothedUpper(model.dataset, model.modulus, model.candidates[j]).value;
        if (std::abs(g - model.gValues[j]) > checkTol)
            throw std::runtime_error(path + ": cached value " + std::to_string(j) +
                                     " disagrees with recomputation");
    }
    return model;
}

std::vector<std::vector<double>> readQueriesCsv(const std::string& path, std::size_t dim)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r")
            continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            try {
                std::size_t used = 0;
                const double v = std::stod(cell, &used);
                row.push_back(v);
                (void)used;
            } catch (...) {
                numeric = false;
                break;
            }
        }
        if (!numeric) {
            if (first) {
                first = false;
                continue; // header row
            }
            throw std::runtime_error(path + ": non-numeric query row: " + line);
        }
        first = false;
        if (row.size() != dim)
            throw std::runtime_error(path + ": query row has " +
                                     std::to_string(row.size()) + " fields, want " +
                                     std::to_string(dim));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace jetconvex
