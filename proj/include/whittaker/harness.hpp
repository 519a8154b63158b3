#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "whittaker/expr.hpp"
#include "whittaker/verify.hpp"

namespace whittaker {

/// Invalid configuration; the message names the violated precondition.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Target module could not interpret an operator token.
class UnsupportedToken : public std::runtime_error {
 public:
  UnsupportedToken(const OperatorToken& tok, const std::string& module)
      : std::runtime_error("token '" + tok.name + "' at position " +
                           std::to_string(tok.position) + " not supported by target module " +
                           module) {}
};

enum class ModuleKind { Universal, CriticalQuotient, BorelVir, Wakimoto, Weyl, Lattice };

struct RunConfig {
  ModuleKind kind = ModuleKind::Universal;
  Rational lambda = 0, mu = 0, kappa = 0, kappa1 = 0;
  Rational chi0 = 0, chi1 = 0;  // Wakimoto tensor variant
  std::optional<LaurentData> series;  // c(z), chi(z) or the lattice character
  std::optional<Rational> zdot;       // Casimir eigenvalue of an intended d, Casimir quotient
  TruncationBox box{3, 3};
  std::uint64_t seed = 0;
  std::string suite;
  Json source;
};

inline std::string to_string(ModuleKind k) {
  switch (k) {
    case ModuleKind::Universal: return "universal";
    case ModuleKind::CriticalQuotient: return "critical_quotient";
    case ModuleKind::BorelVir: return "borel_vir";
    case ModuleKind::Wakimoto: return "wakimoto";
    case ModuleKind::Weyl: return "weyl";
    case ModuleKind::Lattice: return "lattice";
  }
  return "?";
}

inline TruncationBox parse_box(const std::string& text) {
  auto comma = text.find(',');
  try {
    if (comma == std::string::npos) throw std::invalid_argument("");
    std::size_t used = 0;
    int w = std::stoi(text.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument("");
    std::string rest = text.substr(comma + 1);
    int l = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("");
    if (w < 0 || l < 0) throw ConfigError("box bounds must be non-negative");
    return {w, l};
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("box must read W,L with integers W and L, got '" + text + "'");
  }
}

/// Reads and validates a config document. Required keys depend on "module".
inline RunConfig parse_config(const Json& j) {
  RunConfig cfg;
  cfg.source = j;
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  try {
    static const std::map<std::string, ModuleKind> kinds{
        {"universal", ModuleKind::Universal}, {"critical_quotient", ModuleKind::CriticalQuotient},
        {"borel_vir", ModuleKind::BorelVir},   {"wakimoto", ModuleKind::Wakimoto},
        {"weyl", ModuleKind::Weyl},             {"lattice", ModuleKind::Lattice}};
    std::string kind = j.value("module", "universal");
    auto it = kinds.find(kind);
    if (it == kinds.end()) throw ConfigError("unknown module kind '" + kind + "'");
    cfg.kind = it->second;
    auto rat = [&](const char* key, Rational& out) {
      if (j.contains(key)) out = rational_from_json(j.at(key));
    };
    rat("lambda", cfg.lambda);
    rat("mu", cfg.mu);
    rat("kappa", cfg.kappa);
    rat("kappa1", cfg.kappa1);
    rat("chi0", cfg.chi0);
    rat("chi1", cfg.chi1);
    if (j.contains("zdot")) cfg.zdot = rational_from_json(j.at("zdot"));
    for (const char* key : {"c", "chi"}) {
      if (j.contains(key)) cfg.series = laurent_from_json(j.at(key));
    }
    if (j.contains("box")) {
      const auto& b = j.at("box");
      cfg.box = {b.at(0).get<int>(), b.at(1).get<int>()};
    }
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.suite = j.value("suite", "");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("malformed config: ") + ex.what());
  }

  const bool wak_chi = cfg.kind == ModuleKind::Wakimoto && cfg.series;
  switch (cfg.kind) {
    case ModuleKind::CriticalQuotient:
      if (cfg.lambda == 0) throw ConfigError("critical_quotient requires lambda != 0");
      if (!cfg.series) cfg.series = LaurentData::weight2({});
      if (cfg.series->convention != LaurentData::Convention::Weight2) {
        throw ConfigError("critical_quotient requires c in the weight2 convention");
      }
      if (cfg.series->max_mode() > 0) {
        throw ConfigError("critical_quotient requires c supported in modes n <= 0");
      }
      cfg.kappa = -2;
      break;
    case ModuleKind::Wakimoto:
      if (wak_chi) {
        if (cfg.series->convention != LaurentData::Convention::Weight1) {
          throw ConfigError("wakimoto with chi requires the weight1 convention");
        }
        if (j.contains("kappa") && cfg.kappa != -2) {
          throw ConfigError("wakimoto with a chi series requires kappa = -2");
        }
        cfg.kappa = -2;
      }
      break;
    case ModuleKind::Lattice:
      if (cfg.lambda == 0) throw ConfigError("lattice requires lambda != 0");
      if (!cfg.series) cfg.series = LaurentData::weight2({});
      if (cfg.series->convention != LaurentData::Convention::Weight2) {
        throw ConfigError("lattice requires chi in the weight2 convention");
      }
      cfg.kappa = -2;
      break;
    case ModuleKind::Weyl:
      cfg.kappa = 1;
      break;
    case ModuleKind::Universal:
    case ModuleKind::BorelVir:
      break;
  }
  if (cfg.zdot && (cfg.kind != ModuleKind::Universal || cfg.kappa == -2)) {
    throw ConfigError("zdot applies to a noncritical universal module");
  }
  return cfg;
}

/// Non-fatal notes about the parameters, printed before any work is done.
inline std::vector<std::string> config_warnings(const RunConfig& cfg) {
  std::vector<std::string> out;
  if (!cfg.zdot) return out;
  if (cfg.mu != 0) out.push_back("zdot is only meaningful for mu = 0");
  if (auto hit = casimir_exceptional_pair(cfg.kappa, *cfg.zdot)) {
    out.push_back("zdot = " + format_rational(*cfg.zdot) + " is exceptional (i = " +
                  std::to_string(hit->first) + ", m = " + std::to_string(hit->second) +
                  "); the d, Casimir quotient need not be simple");
  }
  return out;
}

/// A constructed module of any supported kind.
class ModuleHandle {
 public:
  explicit ModuleHandle(const RunConfig& cfg) : cfg_(cfg) {
    switch (cfg.kind) {
      case ModuleKind::Universal:
        universal_ = std::make_unique<UniversalModule>(params());
        break;
      case ModuleKind::CriticalQuotient:
        quotient_ = std::make_unique<CriticalQuotient>(cfg.lambda, cfg.mu, *cfg.series);
        break;
      case ModuleKind::BorelVir:
        borel_ = std::make_unique<BorelVirModule>(params());
        break;
      case ModuleKind::Wakimoto:
        free_ = std::make_unique<FreeFieldModule>(
            cfg.series ? FreeFieldModule::one_dim_chi(cfg.lambda, cfg.mu, -2, *cfg.series)
                       : FreeFieldModule::tensor_n1(cfg.lambda, cfg.mu, cfg.chi0, cfg.chi1,
                                                    cfg.kappa));
        break;
      case ModuleKind::Weyl:
        free_ = std::make_unique<FreeFieldModule>(FreeFieldModule::weyl(cfg.lambda, cfg.mu));
        break;
      case ModuleKind::Lattice:
        lattice_ = std::make_unique<LatticeModule>(cfg.lambda, *cfg.series);
        break;
    }
  }

  const RunConfig& config() const { return cfg_; }
  WhittakerParams params() const { return {cfg_.lambda, cfg_.mu, cfg_.kappa, cfg_.kappa1}; }

  /// Calls fn with the concrete module.
  template <class Fn>
  decltype(auto) visit(Fn&& fn) const {
    switch (cfg_.kind) {
      case ModuleKind::Universal: return fn(*universal_);
      case ModuleKind::CriticalQuotient: return fn(*quotient_);
      case ModuleKind::BorelVir: return fn(*borel_);
      case ModuleKind::Wakimoto:
      case ModuleKind::Weyl: return fn(*free_);
      case ModuleKind::Lattice: return fn(*lattice_);
    }
    throw std::logic_error("unreachable module kind");
  }

  const UniversalModule* universal() const { return universal_.get(); }
  const CriticalQuotient* quotient() const { return quotient_.get(); }
  const BorelVirModule* borel() const { return borel_.get(); }
  const FreeFieldModule* free_field() const { return free_.get(); }
  const LatticeModule* lattice() const { return lattice_.get(); }

  AlgebraId algebra() const {
    switch (cfg_.kind) {
      case ModuleKind::BorelVir: return AlgebraId::BorelVir;
      case ModuleKind::Weyl: return AlgebraId::Borel1;
      default: return AlgebraId::AffineSl2;
    }
  }

 private:
  RunConfig cfg_;
  std::unique_ptr<UniversalModule> universal_;
  std::unique_ptr<CriticalQuotient> quotient_;
  std::unique_ptr<BorelVirModule> borel_;
  std::unique_ptr<FreeFieldModule> free_;
  std::unique_ptr<LatticeModule> lattice_;
};

inline std::string format_label(const Monomial& m) { return format_monomial(m); }
inline std::string format_label(const FreeFieldLabel& l) { return format_free_field(l); }
inline std::string format_label(const PiLabel& l) { return format_pi(l); }

/// Result of `act`: the vector in JSON and in the module's printed form.
struct ActResult {
  Json vector;
  std::string text;
};

namespace detail {

template <class M>
typename M::Vector apply_token(const M& mod, const OperatorToken& tok, const typename M::Vector& v,
                               const std::string& kind) {
  using Fam = Family;
  static const std::map<std::string, Fam> families{
      {"e", Fam::E}, {"f", Fam::F}, {"h", Fam::H}, {"phi", Fam::Phi}};
  auto fam = families.find(tok.name);
  if (fam != families.end()) {
    try {
      return mod.act(GenSymbol{fam->second, tok.mode}, v);
    } catch (const std::domain_error&) {
      throw UnsupportedToken(tok, kind);
    }
  }
  if (tok.name == "L" || tok.name == "T") {
    if constexpr (std::is_same_v<M, BorelVirModule>) {
      if (tok.name == "L") return mod.act(L(tok.mode), v);
      throw UnsupportedToken(tok, kind);
    } else {
      bool critical = Rational(mod.level()) == -2;
      if ((tok.name == "L") == critical) throw UnsupportedToken(tok, kind);
      QuadraticFields<M> q(mod);
      return tok.name == "L" ? q.L(tok.mode, v) : q.T(tok.mode, v);
    }
  }
  if constexpr (std::is_same_v<M, FreeFieldModule>) {
    if (tok.name == "a") return mod.a(tok.mode, v);
    if (tok.name == "astar") return mod.astar(tok.mode, v);
  }
  if constexpr (std::is_same_v<M, LatticeModule>) {
    if (tok.name == "a") return mod.a(tok.mode, v);
    if (tok.name == "ainv") return mod.ainv(tok.mode, v);
    if (tok.name == "astar") return mod.astar(tok.mode, v);
    // On the lattice module the degree operator is d = -L(0).
    if (tok.name == "d") return Rational(-1) * mod.L0(v);
  }
  throw UnsupportedToken(tok, kind);
}

template <class M>
typename M::Label parse_target(const M&, const Json& j) {
  if constexpr (std::is_same_v<M, LatticeModule>) {
    return pi_label_from_json(j);
  } else if constexpr (std::is_same_v<M, FreeFieldModule>) {
    return free_field_label_from_json(j);
  } else if constexpr (std::is_same_v<M, BorelVirModule>) {
    return label_from_json(j, BorelVirModule::order).second;
  } else {
    return label_from_json(j, affine_lowering_order).second;
  }
}

}  // namespace detail

/// Applies the expression (rightmost factor first) to `target`, or to the
/// cyclic vector when no target is given.
inline ActResult run_act(const ModuleHandle& handle, const std::string& text,
                         const std::optional<Json>& target = std::nullopt) {
  OperatorExpr expr = parse_operator_expr(text);
  return handle.visit([&](const auto& mod) {
    using M = std::decay_t<decltype(mod)>;
    typename M::Vector v = mod.cyclic();
    if (target) {
      try {
        v = M::Vector::unit(detail::parse_target(mod, *target));
      } catch (const std::exception& ex) {
        throw ConfigError(std::string("bad target label: ") + ex.what());
      }
    }
    for (auto it = expr.ops.rbegin(); it != expr.ops.rend(); ++it) {
      v = detail::apply_token(mod, *it, v, to_string(handle.config().kind));
    }
    v *= expr.scalar;
    return ActResult{vector_to_json(v),
                     format_vector(v, [](const auto& l) { return format_label(l); })};
  });
}

/// Whittaker vectors of type (lambda, mu) in the box.
inline Report run_kernel(const ModuleHandle& handle, const TruncationBox& box) {
  const auto& cfg = handle.config();
  ReportBuilder rb("whittaker-kernel", cfg.seed, cfg.source);
  handle.visit([&](const auto& mod) {
    using M = std::decay_t<decltype(mod)>;
    if constexpr (std::is_same_v<M, BorelVirModule>) {
      throw ConfigError("the kernel solver needs an affine module");
    } else {
      if (cfg.kind == ModuleKind::Weyl) throw ConfigError("the kernel solver needs an affine module");
      rb.run("Whittaker vectors of type (lambda, mu) in the box", "Whittaker vector kernel", [&] {
        auto ker = whittaker_kernel(mod, cfg.lambda, cfg.mu, mod.box(box), box.max_depth);
        Outcome o;
        Json basis = Json::array(), text = Json::array();
        for (const auto& v : ker) {
          basis.push_back(vector_to_json(v));
          text.push_back(format_vector(v, [](const auto& l) { return format_label(l); }));
        }
        o.residual = {{"dimension", ker.size()}, {"basis", basis}, {"basis_text", text}};
        return o;
      });
    }
  });
  return rb.take();
}

// Suites ---------------------------------------------------------------------

struct SuiteContext {
  const ModuleHandle& handle;
  TruncationBox box;
  std::uint64_t seed;
  ReportBuilder& rb;
};

using SuiteFn = std::function<void(SuiteContext&)>;

struct SuiteInfo {
  std::string name;
  std::string summary;
  SuiteFn run;
};

namespace detail {

inline void require_kind(const SuiteContext& ctx, std::initializer_list<ModuleKind> kinds,
                         const std::string& suite) {
  for (auto k : kinds) {
    if (ctx.handle.config().kind == k) return;
  }
  throw ConfigError("suite '" + suite + "' does not apply to module kind " +
                    to_string(ctx.handle.config().kind));
}

inline Outcome scalar_outcome(bool pass, Json residual) {
  Outcome o;
  o.pass = pass;
  o.residual = std::move(residual);
  return o;
}

inline void suite_bracket_tables(SuiteContext& ctx) {
  for (AlgebraId alg : {AlgebraId::AffineSl2, AlgebraId::ExtendedSl2, AlgebraId::BorelVir,
                        AlgebraId::BorelT, AlgebraId::Ttilde, AlgebraId::Borel1}) {
    ctx.rb.run("antisymmetry and Jacobi in " + to_string(alg) + ", |mode| <= 4",
               "bracket table", [&] { return bracket_integrity(alg, 4); });
  }
}

inline void suite_affine_relations(SuiteContext& ctx) {
  const int bound = std::min(3, ctx.box.max_depth + 1);
  ctx.handle.visit([&](const auto& mod) {
    using M = std::decay_t<decltype(mod)>;
    auto labels = mod.box(ctx.box);
    std::vector<GenSymbol> gens;
    AlgebraId alg = ctx.handle.algebra();
    if (alg == AlgebraId::AffineSl2) {
      gens = affine_modes(bound);
    } else {
      for (const auto& g : algebra_generators(alg, bound)) {
        if (!is_central(g)) gens.push_back(g);
      }
    }
    ctx.rb.run("[x, y] v = x(y v) - y(x v) on every box label", "representation property",
               [&] { return representation_property(mod, alg, labels, gens); });
    std::mt19937_64 rng(ctx.seed);
    ctx.rb.run("representation property on three seeded random box vectors",
               "representation property", [&] {
                 detail::Tally tally;
                 for (int s = 0; s < 3; ++s) {
                   auto v = random_vector(labels, rng);
                   for (std::size_t i = 0; i < gens.size(); ++i) {
                     for (std::size_t j = i + 1; j < gens.size(); ++j) {
                       auto r = mod.act(gens[i], mod.act(gens[j], v)) -
                                mod.act(gens[j], mod.act(gens[i], v));
                       r -= act_element(mod, bracket(alg, gens[i], gens[j]), v);
                       tally.record(r, [&] {
                         return to_string(gens[i]) + ", " + to_string(gens[j]) + " on sample " +
                                std::to_string(s);
                       });
                     }
                   }
                 }
                 return tally.outcome();
               });
    (void)sizeof(M);
  });
}

inline void suite_sugawara(SuiteContext& ctx) {
  const auto& cfg = ctx.handle.config();
  if (cfg.kappa == -2) throw ConfigError("the sugawara suite needs kappa != -2");
  auto body = [&](const auto& mod) {
    using M = std::decay_t<decltype(mod)>;
    QuadraticFields<M> q(mod);
    auto labels = mod.box(ctx.box);
    ctx.rb.run("[L(n), x(m)] = -m x(n+m), |n|, |m| <= 2", "Sugawara commutator",
               [&] { return sugawara_commutators(q, labels, 2, affine_modes(2)); });
    ctx.rb.run("Virasoro relation with central charge 3 kappa/(kappa+2), |n|, |m| <= 2",
               "Virasoro relation", [&] { return virasoro_relation(q, labels, 2); });
    if constexpr (std::is_same_v<M, UniversalModule>) {
      ctx.rb.run("L(1) w = lambda mu/(kappa+2) w (differs from lambda mu unless kappa = -1)",
                 "Sugawara action on the Whittaker vector", [&] {
                   auto w = mod.cyclic();
                   Outcome o = eigen_check(q.L(1, w), w, cfg.lambda * cfg.mu / (cfg.kappa + 2));
                   o.residual["lambda_mu"] = format_rational(cfg.lambda * cfg.mu);
                   return o;
                 });
    }
  };
  if (auto* u = ctx.handle.universal()) return body(*u);
  if (auto* w = ctx.handle.free_field(); w && cfg.kind == ModuleKind::Wakimoto) return body(*w);
  throw ConfigError("the sugawara suite needs a universal or wakimoto module");
}

inline void suite_critical_center(SuiteContext& ctx) {
  const auto& cfg = ctx.handle.config();
  if (cfg.kappa != -2) throw ConfigError("the critical-center suite needs kappa = -2");
  ctx.handle.visit([&](const auto& mod) {
    using M = std::decay_t<decltype(mod)>;
    if constexpr (std::is_same_v<M, BorelVirModule>) {
      throw ConfigError("the critical-center suite needs an affine module");
    } else {
      QuadraticFields<M> q(mod);
      auto labels = mod.box(ctx.box);
      ctx.rb.run("[T(n), x(m)] = 0, |n|, |m| <= 2", "centrality of the Segal-Sugawara modes",
                 [&] { return center_commutators(q, labels, 2, affine_modes(2)); });
      if (cfg.kind == ModuleKind::Universal || cfg.kind == ModuleKind::CriticalQuotient) {
        ctx.rb.run("T(1) w = lambda mu w", "T(1) on the Whittaker vector", [&] {
          auto w = mod.cyclic();
          return eigen_check(q.T(1, w), w, cfg.lambda * cfg.mu);
        });
      }
    }
  });
}

inline void suite_kernel(SuiteContext& ctx) {
  Report r = run_kernel(ctx.handle, ctx.box);
  const auto& c = r.checks.front();
  ctx.rb.run(c.description, c.anchor, [&] { return scalar_outcome(c.pass, c.residual); });
  if (auto* u = ctx.handle.universal(); u && ctx.handle.config().kappa == -2) {
    ctx.rb.run("kernel dimension equals the number of admissible T-monomials",
               "T-monomial basis of Whittaker vectors", [&] {
                 auto tmon = admissible_t_monomials(*u, ctx.box);
                 std::size_t dim = c.residual.at("dimension").get<std::size_t>();
                 return scalar_outcome(dim == tmon.size(),
                                       {{"dimension", dim}, {"t_monomials", tmon.size()}});
               });
  } else {
    ctx.rb.run("kernel is the line of the cyclic vector", "simplicity certificate", [&] {
      std::size_t dim = c.residual.at("dimension").get<std::size_t>();
      return scalar_outcome(dim == 1, {{"dimension", dim}});
    });
  }
}

inline void suite_wakimoto_vector(SuiteContext& ctx) {
  const auto& cfg = ctx.handle.config();
  const auto* mod = ctx.handle.free_field();
  if (!mod || mod->variant() != FreeFieldModule::Variant::TensorN1) {
    throw ConfigError("the wakimoto-vector suite needs a wakimoto module without chi series");
  }
  using V = FreeFieldModule::Vector;
  const auto w = mod->cyclic();
  const auto& [lambda, mu, chi0, chi1, kappa] =
      std::tie(cfg.lambda, cfg.mu, cfg.chi0, cfg.chi1, cfg.kappa);
  const FreeFieldLabel a_minus1{{1}, {}, {}}, astar0{{}, {1}, {}};
  auto f1_with = [&](const Rational& sign) {
    V out;
    out.add_term(astar0, chi1 - 2 * mu * lambda);
    out.add_term({}, mu * (chi0 - kappa));
    out.add_term(a_minus1, sign * mu * mu);
    return out;
  };
  auto vec_outcome = [](const V& got, const V& want) {
    return scalar_outcome(got == want, {{"vector", vector_to_json(got - want)}});
  };
  ctx.rb.run("f(1) v = (chi1 - 2 mu lambda) a*(0) v + mu (chi0 - kappa) v + mu^2 a(-1) v",
             "f(1) on the Wakimoto vector, as displayed",
             [&] { return vec_outcome(mod->act(f(1), w), f1_with(1)); });
  ctx.rb.run("f(1) v = (chi1 - 2 mu lambda) a*(0) v + mu (chi0 - kappa) v - mu^2 a(-1) v",
             "f(1) on the Wakimoto vector, field-consistent sign",
             [&] { return vec_outcome(mod->act(f(1), w), f1_with(-1)); });
  ctx.rb.run("f(2) v = mu (chi1 - lambda mu) v", "f(2) on the Wakimoto vector",
             [&] { return eigen_check(mod->act(f(2), w), w, mu * (chi1 - lambda * mu)); });
  ctx.rb.run("e(0) v = lambda v", "e(0) on the Wakimoto vector",
             [&] { return eigen_check(mod->act(e(0), w), w, lambda); });
  ctx.rb.run("h(1) v = (chi1 - 2 mu lambda) v", "h(1) on the Wakimoto vector",
             [&] { return eigen_check(mod->act(h(1), w), w, chi1 - 2 * mu * lambda); });
  ctx.rb.run("e(n) v = h(n+1) v = f(n+2) v = 0 for 1 <= n <= box depth + 1",
             "annihilation of the Wakimoto vector", [&] {
               detail::Tally tally;
               for (int n = 1; n <= ctx.box.max_depth + 1; ++n) {
                 for (GenSymbol g : {e(n), h(n + 1), f(n + 2)}) {
                   tally.record(mod->act(g, w), [&] { return to_string(g); });
                 }
               }
               return tally.outcome();
             });
}

inline void suite_zero_mu(SuiteContext& ctx) {
  const auto& cfg = ctx.handle.config();
  const auto* mod = ctx.handle.free_field();
  if (!mod || mod->variant() != FreeFieldModule::Variant::TensorN1) {
    throw ConfigError("the zero-mu-wakimoto suite needs a wakimoto module without chi series");
  }
  if (cfg.mu != 0 || cfg.chi1 != 0) throw ConfigError("zero-mu-wakimoto requires mu = chi1 = 0");
  if (cfg.kappa == -2) throw ConfigError("zero-mu-wakimoto requires kappa != -2");
  auto w = mod->cyclic();
  ctx.rb.run("f(1) v = 0", "f(1) on the Wakimoto vector with mu = 0",
             [&] { return eigen_check(mod->act(f(1), w), w, 0); });
  ctx.rb.run("L(0) v = chi0 (chi0 + 2) / (4 (kappa + 2)) v", "L(0) eigenvalue with mu = 0", [&] {
    QuadraticFields<FreeFieldModule> q(*mod);
    return eigen_check(q.L(0, w), w, cfg.chi0 * (cfg.chi0 + 2) / (4 * (cfg.kappa + 2)));
  });
}

inline void suite_sugawara_basis(SuiteContext& ctx) {
  const auto* u = ctx.handle.universal();
  if (!u || ctx.handle.config().kappa == -2 || ctx.handle.config().lambda == 0) {
    throw ConfigError("sugawara-basis needs a universal module with kappa != -2, lambda != 0");
  }
  auto cert = sugawara_basis_certificate(*u, ctx.box);
  ctx.rb.run("Sugawara-substituted basis vectors are independent",
             "basis with L(-n) in place of f(-n)", [&] { return cert.rank; });
  ctx.rb.run("leading coefficient (lambda/(kappa+2))^|k|, other terms have smaller f-block",
             "leading term of the substituted basis", [&] { return cert.leading; });
}

inline void suite_lattice_realization(SuiteContext& ctx) {
  const auto* q = ctx.handle.quotient();
  if (!q) throw ConfigError("lattice-realization needs a critical_quotient module");
  LaurentData chi = q->c_series();
  chi.set(1, q->lambda() * q->mu());
  LatticeModule pi(q->lambda(), chi);
  auto cmp = compare_pbw_realization(*q, pi, q->box(ctx.box), affine_modes(3));
  ctx.rb.run("u w -> u (1 (x) w) intertwines e, f, h with |mode| <= 3",
             "realization in the lattice module", [&] { return cmp.well_defined; });
  ctx.rb.run("the map is injective on the box", "realization in the lattice module",
             [&] { return cmp.injective; });
  ctx.rb.run("T(n) acts by the same scalars on both sides, |n| <= 3",
             "central character of the realization", [&] {
               QuadraticFields<LatticeModule> fields(pi);
               detail::Tally tally;
               auto w = pi.cyclic();
               for (int n = -3; n <= 3; ++n) {
                 auto r = fields.T(n, w);
                 r.add_scaled(w, -q->t_character(n));
                 tally.record(r, [&] { return "T(" + std::to_string(n) + ")"; });
               }
               return tally.outcome();
             });
}

inline void suite_wakimoto_quotient(SuiteContext& ctx) {
  const auto& cfg = ctx.handle.config();
  const auto* wak = ctx.handle.free_field();
  if (!wak || wak->variant() != FreeFieldModule::Variant::OneDimChi) {
    throw ConfigError("wakimoto-quotient needs a wakimoto module with a chi series");
  }
  if (cfg.mu != 0 || cfg.lambda == 0 || wak->chi().max_mode() > 0) {
    throw ConfigError("wakimoto-quotient requires mu = 0, lambda != 0 and chi modes <= 0");
  }
  CriticalQuotient q(cfg.lambda, 0, central_character_from_chi(wak->chi()));
  auto cmp = compare_pbw_realization(q, *wak, q.box(ctx.box), affine_modes(3));
  ctx.rb.run("u w -> u v intertwines e, f, h with |mode| <= 3 for c = (chi^2 - 2 chi')/2",
             "Wakimoto module as critical quotient", [&] { return cmp.well_defined; });
  ctx.rb.run("the map is injective on the box", "Wakimoto module as critical quotient",
             [&] { return cmp.injective; });
  ctx.rb.run("T(n) v = c_n v with c = (chi^2 - 2 chi')/2 for n in -8..2",
             "central character on the Wakimoto module", [&] {
               QuadraticFields<FreeFieldModule> fields(*wak);
               LaurentData c = central_character_from_chi(wak->chi());
               detail::Tally tally;
               for (int n = -8; n <= 2; ++n) {
                 auto r = fields.T(n, wak->cyclic());
                 r.add_scaled(wak->cyclic(), -c.at(n));
                 tally.record(r, [n] { return "T(" + std::to_string(n) + ")"; });
               }
               return tally.outcome();
             });
}

inline void suite_degree_operator(SuiteContext& ctx) {
  const auto* pi = ctx.handle.lattice();
  if (!pi) throw ConfigError("degree-operator needs a lattice module");
  bool only_zero = pi->chi().coeffs.empty() ||
                   (pi->chi().coeffs.size() == 1 && pi->chi().coeffs.count(0));
  auto o = lattice_degree_check(*pi, pi->box(ctx.box), affine_modes(3));
  ctx.rb.run(only_zero ? "[d, x(n)] = n x(n) for d = -L(0)"
                       : "[d, x(n)] = n x(n) fails for d = -L(0) once chi has modes besides 0",
             "degree operator on the lattice realization", [&] {
               Outcome out = o;
               out.pass = o.pass == only_zero;
               out.residual["grading_holds"] = o.pass;
               return out;
             });
}

inline void suite_automorphisms(SuiteContext& ctx) {
  ctx.rb.run("sigma preserves brackets, |mode| <= 4", "involution sigma",
             [&] { return automorphism_check(AlgebraId::ExtendedSl2, 4, sigma); });
  for (int s = -3; s <= 3; ++s) {
    ctx.rb.run("spectral flow by " + std::to_string(s) + " preserves brackets, |mode| <= 4",
               "spectral flow", [&] {
                 return automorphism_check(AlgebraId::AffineSl2, 4,
                                           [s](const GenSymbol& g) { return spectral_flow(s, g); });
               });
  }
  const auto* wak = ctx.handle.free_field();
  if (!wak || wak->variant() != FreeFieldModule::Variant::OneDimChi) return;
  int p = std::max(1, wak->chi().max_mode());
  auto conds = generalized_conditions(wak->lambda(), wak->mu(), wak->chi(), p,
                                      ctx.box.max_depth + 1);
  for (int s = -3; s <= 3; ++s) {
    ctx.rb.run("twisted conditions hold on v for spectral flow by " + std::to_string(s),
               "twisted generalized Whittaker conditions", [&] {
                 SpectralFlowTwist<FreeFieldModule> twisted(*wak, s);
                 detail::Tally tally;
                 auto list = twist_conditions(conds, s);
                 auto res = condition_residuals(twisted, list, twisted.cyclic());
                 for (std::size_t i = 0; i < res.size(); ++i) {
                   tally.record(res[i], [&] { return "condition " + std::to_string(i); });
                 }
                 return tally.outcome();
               });
  }
}

inline void suite_generalized(SuiteContext& ctx) {
  const auto* wak = ctx.handle.free_field();
  if (!wak || wak->variant() != FreeFieldModule::Variant::OneDimChi) {
    throw ConfigError("generalized-whittaker needs a wakimoto module with a chi series");
  }
  int p = wak->chi().max_mode();
  if (p < 1 || wak->chi().at(p) == 0) throw ConfigError("generalized-whittaker needs chi_p != 0, p >= 1");
  auto conds = generalized_conditions(wak->lambda(), wak->mu(), wak->chi(), p,
                                      ctx.box.max_depth + 1);
  auto res = condition_residuals(*wak, conds, wak->cyclic());
  for (std::size_t i = 0; i < conds.size(); ++i) {
    std::string lhs;
    for (const auto& [g, coeff] : conds[i].x) lhs += to_string(g);
    ctx.rb.run(lhs + " v = " + format_rational(conds[i].value) + " v",
               "generalized Whittaker condition",
               [&] { return scalar_outcome(res[i].is_zero(), {{"vector", vector_to_json(res[i])}}); });
  }
}

inline void suite_lattice_relations(SuiteContext& ctx) {
  const auto* pi = ctx.handle.lattice();
  if (!pi) throw ConfigError("lattice-relations needs a lattice module");
  auto labels = pi->box(ctx.box);
  const int bound = std::max(1, ctx.box.max_depth);
  ctx.rb.run("[a(n), a*(m)] = delta, [a, a] = [a*, a*] = 0, |n|, |m| <= box depth",
             "Weyl relations inside the lattice module", [&] {
               detail::Tally tally;
               for (const auto& l : labels) {
                 auto v = LatticeModule::Vector::unit(l);
                 for (int n = -bound; n <= bound; ++n) {
                   for (int m = -bound; m <= bound; ++m) {
                     auto r = pi->a(n, pi->astar(m, v)) - pi->astar(m, pi->a(n, v));
                     if (n + m == 0) r -= v;
                     tally.record(r, [&] { return "[a, a*] on " + format_pi(l); });
                     tally.record(pi->a(n, pi->a(m, v)) - pi->a(m, pi->a(n, v)),
                                  [&] { return "[a, a] on " + format_pi(l); });
                     tally.record(pi->astar(n, pi->astar(m, v)) - pi->astar(m, pi->astar(n, v)),
                                  [&] { return "[a*, a*] on " + format_pi(l); });
                   }
                 }
               }
               return tally.outcome();
             });
  ctx.rb.run("sum_k a(k) a^{-1}(n-k) acts as delta_{n,0} on the box", "a(z) a^{-1}(z) = Id", [&] {
    detail::Tally tally;
    for (const auto& l : labels) {
      auto v = LatticeModule::Vector::unit(l);
      int w = l.depth() + 2;
      for (int n = -bound; n <= bound; ++n) {
        LatticeModule::Vector r;
        for (int k = n - w - 2; k <= w + 2; ++k) {
          if (k <= -1) {
            r += pi->a(k, pi->ainv(n - k, v));
          } else {
            r += pi->ainv(n - k, pi->a(k, v));
          }
        }
        if (n == 0) r -= v;
        tally.record(r, [&] { return "mode " + std::to_string(n) + " on " + format_pi(l); });
      }
    }
    return tally.outcome();
  });
  ctx.rb.run("L(0) acts on each box label by its depth", "grading of the lattice module", [&] {
    detail::Tally tally;
    for (const auto& l : labels) {
      auto v = LatticeModule::Vector::unit(l);
      auto r = pi->L0(v);
      r.add_scaled(v, -l.depth());
      tally.record(r, [&] { return format_pi(l); });
    }
    return tally.outcome();
  });
}

inline void suite_cyclicity(SuiteContext& ctx) {
  const auto* mod = ctx.handle.free_field();
  if (!mod || ctx.handle.config().kind != ModuleKind::Weyl) {
    throw ConfigError("cyclicity needs a weyl module");
  }
  if (mod->lambda() == 0) throw ConfigError("cyclicity requires lambda != 0");
  CyclicityReport rep;
  // The probe does the spanning and the sampling in one pass; its time is charged here.
  ctx.rb.run("words in phi(n), e(n) applied to v1 span the box", "cyclicity of the Weyl module",
             [&] {
               rep = cyclicity_probe(*mod, ctx.box, ctx.seed);
               return scalar_outcome(rep.full_rank,
                                     {{"reached", rep.reached}, {"box", rep.box_size}});
             });
  ctx.rb.run("each seeded random box vector regenerates v1", "irreducibility probe", [&] {
    Json samples = Json::array();
    for (const auto& s : rep.samples) samples.push_back(s.regenerates);
    return scalar_outcome(!rep.samples.empty() && rep.all_regenerate(), {{"samples", samples}});
  });
}

}  // namespace detail

inline const std::vector<SuiteInfo>& suite_registry() {
  static const std::vector<SuiteInfo> suites{
      {"bracket-tables", "antisymmetry and Jacobi in all six bracket tables",
       detail::suite_bracket_tables},
      {"affine-relations", "representation property on the box", detail::suite_affine_relations},
      {"sugawara", "Sugawara commutators and the Virasoro relation", detail::suite_sugawara},
      {"critical-center", "centrality of T(n) at the critical level",
       detail::suite_critical_center},
      {"whittaker-kernel", "Whittaker-vector kernel dimension", detail::suite_kernel},
      {"wakimoto-vector", "eigenvalues of the Wakimoto vector in M1 (x) N1",
       detail::suite_wakimoto_vector},
      {"zero-mu-wakimoto", "f(1) and L(0) on the Wakimoto vector with mu = chi1 = 0",
       detail::suite_zero_mu},
      {"sugawara-basis", "basis with Sugawara modes in place of f-modes",
       detail::suite_sugawara_basis},
      {"lattice-realization", "critical quotient realized inside the lattice module",
       detail::suite_lattice_realization},
      {"wakimoto-quotient", "Wakimoto module compared with the critical quotient",
       detail::suite_wakimoto_quotient},
      {"degree-operator", "d = -L(0) on the lattice realization", detail::suite_degree_operator},
      {"automorphisms", "sigma, spectral flow and twisted conditions", detail::suite_automorphisms},
      {"generalized-whittaker", "generalized Whittaker conditions of depth p",
       detail::suite_generalized},
      {"lattice-relations", "Weyl relations, a a^{-1} = Id and grading on the lattice module",
       detail::suite_lattice_relations},
      {"cyclicity", "generation and irreducibility probe for the Weyl module",
       detail::suite_cyclicity},
  };
  return suites;
}

inline const SuiteInfo& find_suite(const std::string& name) {
  for (const auto& s : suite_registry()) {
    if (s.name == name) return s;
  }
  std::string known;
  for (const auto& s : suite_registry()) known += (known.empty() ? "" : ", ") + s.name;
  throw ConfigError("unknown suite '" + name + "' (known: " + known + ")");
}

inline Report run_suite(const ModuleHandle& handle, const std::string& name,
                        const TruncationBox& box, std::uint64_t seed) {
  const SuiteInfo& suite = find_suite(name);
  Json config = handle.config().source;
  config["box"] = {box.max_depth, box.max_length};
  ReportBuilder rb(name, seed, config);
  SuiteContext ctx{handle, box, seed, rb};
  suite.run(ctx);
  return rb.take();
}

}  // namespace whittaker
