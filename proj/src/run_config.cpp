#include "vortex/run_config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace vortex {

namespace {

using nlohmann::json;

void rejectUnknownKeys(const json& node, const std::set<std::string>& allowed,
                       const std::string& where) {
  for (const auto& [key, value] : node.items()) {
    if (!allowed.count(key))
      throw ConfigError("unknown key \"" + key + "\" in " + where);
  }
}

Vec2 parseVec2(const json& node, const std::string& where) {
  if (!node.is_array() || node.size() != 2)
    throw ConfigError(where + " must be a [x, y] pair");
  return {node[0].get<double>(), node[1].get<double>()};
}

std::vector<Vec2> parsePointList(const json& node, const std::string& where) {
  std::vector<Vec2> pts;
  if (!node.is_array()) throw ConfigError(where + " must be an array of points");
  for (std::size_t i = 0; i < node.size(); ++i)
    pts.push_back(parseVec2(node[i], where + "[" + std::to_string(i) + "]"));
  return pts;
}

std::vector<Vec2> readBoundaryFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open boundary file " + path.string());
  std::vector<Vec2> pts;
  double x, y;
  while (in >> x >> y) pts.emplace_back(x, y);
  if (pts.size() < 3)
    throw ConfigError("boundary file " + path.string() +
                      " holds fewer than 3 points");
  return pts;
}

std::string fnv1a(const std::string& text) {
  unsigned long long hash = 14695981039346656037ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << hash;
  return os.str();
}

}  // namespace

RunConfig RunConfig::fromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return fromJsonText(buf.str());
}

RunConfig RunConfig::fromJsonText(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be an object");

  RunConfig cfg;
  cfg.configHash = fnv1a(doc.dump());

  rejectUnknownKeys(doc,
                    {"domain", "backend", "strengths", "flux", "seed",
                     "output_dir", "check", "green", "equilibrium", "simulate",
                     "desingularize", "validate"},
                    "config root");

  // Domain -----------------------------------------------------------------
  if (!doc.contains("domain")) throw ConfigError("config needs a \"domain\"");
  {
    const json& d = doc["domain"];
    rejectUnknownKeys(d, {"shape", "inner_radius", "boundary_file"}, "domain");
    const std::string shape = d.value("shape", "");
    if (shape == "disc") {
      cfg.domain = makeUnitDisc();
    } else if (shape == "annulus") {
      if (!d.contains("inner_radius"))
        throw ConfigError("annulus domain needs \"inner_radius\"");
      cfg.domain = makeAnnulus(d["inner_radius"].get<double>());
    } else if (shape == "panel") {
      if (!d.contains("boundary_file"))
        throw ConfigError("panel domain needs \"boundary_file\"");
      cfg.domain = makePanelDomain(
          readBoundaryFile(d["boundary_file"].get<std::string>()));
    } else {
      throw ConfigError("domain shape must be disc, annulus, or panel");
    }
  }

  // Backend ----------------------------------------------------------------
  if (doc.contains("backend")) {
    const json& b = doc["backend"];
    rejectUnknownKeys(b, {"type", "truncation", "panels", "quadrature_order"},
                      "backend");
    const std::string type = b.value("type", "");
    if (type == "disc") {
      if (cfg.domain->shape() != DomainShape::UnitDisc)
        throw ConfigError("disc backend requires the disc domain");
      cfg.backend = makeDiscGreen();
    } else if (type == "annulus_series") {
      if (cfg.domain->shape() != DomainShape::Annulus)
        throw ConfigError("annulus_series backend requires an annulus domain");
      cfg.backend = makeAnnulusGreen(
          static_cast<const AnnulusDomain&>(*cfg.domain).innerRadius(),
          b.value("truncation", 0));
    } else if (type == "bem") {
      cfg.backend = makeBemGreen(cfg.domain, b.value("panels", 512),
                                 b.value("quadrature_order", 1));
    } else {
      throw ConfigError("backend type must be disc, annulus_series, or bem");
    }
  } else {
    switch (cfg.domain->shape()) {
      case DomainShape::UnitDisc:
        cfg.backend = makeDiscGreen();
        break;
      case DomainShape::Annulus:
        cfg.backend = makeAnnulusGreen(
            static_cast<const AnnulusDomain&>(*cfg.domain).innerRadius());
        break;
      case DomainShape::Panel:
        cfg.backend = makeBemGreen(cfg.domain, 0, 1);
        break;
    }
  }

  if (doc.contains("strengths")) {
    std::vector<double> g;
    for (const auto& v : doc["strengths"]) g.push_back(v.get<double>());
    cfg.strengths = Strengths(g);
  }

  if (doc.contains("flux")) {
    const json& f = doc["flux"];
    rejectUnknownKeys(f, {"re", "im"}, "flux");
    std::vector<double> re, im;
    if (f.contains("re"))
      for (const auto& v : f["re"]) re.push_back(v.get<double>());
    if (f.contains("im"))
      for (const auto& v : f["im"]) im.push_back(v.get<double>());
    cfg.flux = HarmonicPoly(re, im);
  }

  cfg.seed = doc.value("seed", 0ull);
  cfg.flow.seed = cfg.seed == 0 ? 12345 : cfg.seed;
  if (doc.contains("output_dir"))
    cfg.outputDir = doc["output_dir"].get<std::string>();

  if (doc.contains("check")) {
    rejectUnknownKeys(doc["check"], {}, "check");
  }

  if (doc.contains("green")) {
    const json& g = doc["green"];
    rejectUnknownKeys(g, {"points", "pairs"}, "green");
    if (g.contains("points"))
      cfg.greenPoints = parsePointList(g["points"], "green.points");
    if (g.contains("pairs")) {
      for (std::size_t i = 0; i < g["pairs"].size(); ++i) {
        const json& pr = g["pairs"][i];
        if (!pr.is_array() || pr.size() != 2)
          throw ConfigError("green.pairs entries must be [[x,y],[x,y]]");
        cfg.greenPairs.emplace_back(parseVec2(pr[0], "green.pairs"),
                                    parseVec2(pr[1], "green.pairs"));
      }
    }
  }

  if (doc.contains("equilibrium")) {
    const json& e = doc["equilibrium"];
    rejectUnknownKeys(e,
                      {"rho", "center", "resolution", "newton_tol",
                       "max_steps", "candidate_tol", "starts",
                       "write_flow_history"},
                      "equilibrium");
    cfg.cycle.rho = e.value("rho", 0.1);
    if (e.contains("center")) cfg.cycle.center = parseVec2(e["center"], "center");
    cfg.cycle.resolution = e.value("resolution", 128);
    cfg.newtonTol = e.value("newton_tol", 1e-11);
    cfg.flow.maxSteps = e.value("max_steps", cfg.flow.maxSteps);
    cfg.flow.candidateTol = e.value("candidate_tol", cfg.flow.candidateTol);
    cfg.n2Starts = e.value("starts", 32);
    cfg.writeFlowHistory = e.value("write_flow_history", false);
  }

  if (doc.contains("simulate")) {
    const json& s = doc["simulate"];
    rejectUnknownKeys(s, {"initial", "dt", "T", "scheme", "stride"}, "simulate");
    if (!s.contains("initial"))
      throw ConfigError("simulate needs \"initial\" positions");
    cfg.initial = parsePointList(s["initial"], "simulate.initial");
    cfg.integrateParams.dt = s.value("dt", 1e-3);
    cfg.integrateParams.T = s.value("T", 10.0);
    cfg.integrateParams.stride = s.value("stride", 100);
    const std::string scheme = s.value("scheme", "implicit_midpoint");
    if (scheme == "implicit_midpoint")
      cfg.integrateParams.scheme = Scheme::ImplicitMidpoint;
    else if (scheme == "rk4")
      cfg.integrateParams.scheme = Scheme::Rk4;
    else
      throw ConfigError("scheme must be implicit_midpoint or rk4");
  }

  if (doc.contains("desingularize")) {
    const json& d = doc["desingularize"];
    rejectUnknownKeys(
        d, {"epsilons", "p", "R", "grid_h", "equilibrium", "write_fields"},
        "desingularize");
    if (d.contains("epsilons"))
      for (const auto& v : d["epsilons"]) cfg.epsilons.push_back(v.get<double>());
    cfg.desing.p = d.value("p", 2.0);
    cfg.desing.R = d.value("R", 1.5);
    cfg.desing.gridH = d.value("grid_h", 1.0 / 256.0);
    if (d.contains("equilibrium"))
      cfg.desingEquilibrium =
          parsePointList(d["equilibrium"], "desingularize.equilibrium");
    cfg.writeFields = d.value("write_fields", false);
  }

  if (doc.contains("validate")) {
    rejectUnknownKeys(doc["validate"], {}, "validate");
  }

  return cfg;
}

}  // namespace vortex
