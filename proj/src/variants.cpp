#include "stoprule/variants.hpp"

#include "stoprule/quadrature.hpp"
#include "stoprule/special.hpp"

#include <algorithm>
#include <cmath>

namespace stoprule {

namespace {

const std::vector<VariantInfo> kCatalog = {
    {VariantId::classical, "classical", true, false},
    {VariantId::postdoc, "postdoc", true, false},
    {VariantId::best_or_worst, "best-or-worst", true, false},
    {VariantId::uncertain, "uncertain", true, false},
    {VariantId::cost, "cost", true, false},
    {VariantId::win_lose_draw, "win-lose-draw", true, false},
    {VariantId::duration, "duration", true, false},
    {VariantId::multicriteria, "multicriteria", true, false},
    {VariantId::random_n, "random-N", false, true},
    {VariantId::lottery, "lottery", true, false},
    {VariantId::wildcard, "wildcard", false, true},
    {VariantId::interruption, "interruption", false, false},
    {VariantId::penalty, "penalty", true, false},
};

}  // namespace

const std::vector<VariantInfo>& catalog() { return kCatalog; }

const VariantInfo& variant_info(VariantId id) {
  for (const auto& info : kCatalog)
    if (info.id == id) return info;
  throw ValidationError("variant_info: unknown variant id");
}

VariantId variant_from_name(const std::string& name) {
  for (const auto& info : kCatalog)
    if (info.name == name) return info.id;
  std::string known;
  for (const auto& info : kCatalog) known += (known.empty() ? "" : ", ") + info.name;
  throw ValidationError("unknown variant '" + name + "' (known: " + known + ")");
}

void validate_params(VariantId id, const VariantParams& params) {
  switch (id) {
    case VariantId::uncertain:
      if (!(params.p > 0.0 && params.p <= 1.0))
        throw ValidationError("uncertain: p must lie in (0, 1]");
      break;
    case VariantId::cost:
      if (!(params.c >= 0.0 && params.c < 1.0))
        throw ValidationError("cost: c must lie in [0, 1)");
      break;
    case VariantId::win_lose_draw:
      if (!(params.alpha >= 0.0 && params.beta >= 0.0 && params.gamma >= 0.0))
        throw ValidationError("win-lose-draw: alpha, beta, gamma must be >= 0");
      if (!(params.alpha + params.beta > 0.0))
        throw ValidationError("win-lose-draw: alpha + beta must be positive");
      break;
    case VariantId::multicriteria:
      if (params.m < 1) throw ValidationError("multicriteria: m must be >= 1");
      break;
    case VariantId::penalty:
      if (!(params.b >= 0.0)) throw ValidationError("penalty: b must be >= 0");
      break;
    case VariantId::lottery:
      if (params.Y) {
        // 1000-point grid: monotonicity check plus a Lipschitz estimate
        double prev = params.Y(0.0);
        if (!std::isfinite(prev)) throw ValidationError("lottery: Y(0) is not finite");
        double lipschitz = 0.0;
        for (int i = 1; i <= 1000; ++i) {
          const double cur = params.Y(i / 1000.0);
          if (!std::isfinite(cur)) throw ValidationError("lottery: Y is not finite on [0, 1]");
          if (cur < prev - 1e-12) throw ValidationError("lottery: Y must be non-decreasing");
          lipschitz = std::max(lipschitz, std::abs(cur - prev) * 1000.0);
          prev = cur;
        }
        if (!std::isfinite(lipschitz))
          throw ValidationError("lottery: Y has no finite Lipschitz bound");
      }
      break;
    default:
      break;
  }
}

std::function<double(double)> closed_form_f(VariantId id, const VariantParams& params) {
  switch (id) {
    case VariantId::classical:
      return [](double x) { return x < 1e-12 ? 0.0 : -x * std::log(x); };
    case VariantId::postdoc:
      return [](double x) { return x - x * x; };
    case VariantId::best_or_worst:
      return [](double x) { return 2.0 * x - 2.0 * x * x; };
    case VariantId::uncertain: {
      const double p = params.p;
      if (p == 1.0) return closed_form_f(VariantId::classical, params);
      return [p](double x) { return p * (std::pow(x, p) - x) / (1.0 - p); };
    }
    case VariantId::cost: {
      const double c = params.c;
      return [c](double x) {
        return x < 1e-12 ? 0.0 : -c * x + (c - 1.0) * x * std::log(x);
      };
    }
    case VariantId::win_lose_draw: {
      const double a = params.alpha, b = params.beta, g = params.gamma;
      return [a, b, g](double x) {
        return x < 1e-12 ? -b : -(a + b) * x * std::log(x) + b * (x - 1.0) - g * x;
      };
    }
    case VariantId::duration:
      return [](double x) { return x < 1e-12 ? 0.0 : x * x - x - x * std::log(x); };
    case VariantId::multicriteria: {
      const double m = static_cast<double>(params.m);
      if (params.m == 1) return closed_form_f(VariantId::classical, params);
      return [m](double x) { return -m * (std::pow(x, m) - x) / (m - 1.0); };
    }
    case VariantId::random_n:
      return [](double x) {
        if (x < 1e-12 || x > 1.0 - 1e-12) return 0.0;
        const double l = std::log(x);
        return -x * l * l / (2.0 * (x - 1.0));
      };
    case VariantId::lottery: {
      const VariantParams captured = params;
      return [captured](double x) {
        return std::exp(x) * integrate(
            [&captured](double u) { return std::exp(-u) * detail::identity_or_y(captured, u); },
            x, 1.0, 1e-14);
      };
    }
    case VariantId::wildcard:
      return [](double x) {
        if (x < 1e-12) return 0.0;
        if (x > 1.0 - 1e-12) return 0.5;
        return (-2.0 * x * x + 2.0 * x + 3.0 * x * std::log(x)) / (2.0 * (x - 1.0));
      };
    case VariantId::interruption: {
      const double at_one = special::expint_ei(-1.0);
      return [at_one](double x) {
        return x < 1e-12 ? 0.0 : std::exp(x) * x * (at_one - special::expint_ei(-x));
      };
    }
    case VariantId::penalty: {
      const double b = params.b;
      return [b](double x) {
        return x < 1e-12 ? 0.0 : -b * x * x + b * x + (b - 1.0) * x * std::log(x);
      };
    }
  }
  throw ValidationError("closed_form_f: unknown variant id");
}

std::function<double(double)> closed_form_f_pp(VariantId id, const VariantParams& params) {
  switch (id) {
    case VariantId::classical:
      return [](double x) { return -1.0 / x; };
    case VariantId::postdoc:
      return [](double) { return -2.0; };
    case VariantId::best_or_worst:
      return [](double) { return -4.0; };
    case VariantId::uncertain: {
      const double p = params.p;
      if (p == 1.0) return closed_form_f_pp(VariantId::classical, params);
      return [p](double x) { return -p * p * std::pow(x, p - 2.0); };
    }
    case VariantId::cost: {
      const double c = params.c;
      return [c](double x) { return (c - 1.0) / x; };
    }
    case VariantId::win_lose_draw: {
      const double ab = params.alpha + params.beta;
      return [ab](double x) { return -ab / x; };
    }
    case VariantId::duration:
      return [](double x) { return 2.0 - 1.0 / x; };
    case VariantId::multicriteria: {
      const double m = static_cast<double>(params.m);
      if (params.m == 1) return closed_form_f_pp(VariantId::classical, params);
      return [m](double x) { return -m * m * std::pow(x, m - 2.0); };
    }
    case VariantId::random_n:
      return [](double x) {
        const double l = std::log(x);
        const double d = x - 1.0;
        return (x - l - 1.0) * (-x + x * l + 1.0) / (d * d * d * x);
      };
    case VariantId::interruption: {
      const double at_one = special::expint_ei(-1.0);
      return [at_one](double x) {
        return std::exp(x) * (x + 2.0) * (at_one - special::expint_ei(-x)) - (x + 1.0) / x;
      };
    }
    case VariantId::penalty: {
      const double b = params.b;
      return [b](double x) { return -2.0 * b + (b - 1.0) / x; };
    }
    default:
      return {};  // finite-difference fallback
  }
}

std::function<double(double)> stop_limit_curve(VariantId id, const VariantParams& params) {
  switch (id) {
    case VariantId::postdoc:
      return [](double x) { return x * x; };
    case VariantId::cost: {
      const double c = params.c;
      return [c](double x) { return (1.0 - c) * x; };
    }
    case VariantId::win_lose_draw: {
      const double ab = params.alpha + params.beta, b = params.beta;
      return [ab, b](double x) { return ab * x - b; };
    }
    case VariantId::duration:
      return [](double x) { return x - x * x; };
    case VariantId::random_n:
      return [](double x) {
        if (x < 1e-12) return 0.0;
        if (x > 1.0 - 1e-12) return 1.0;
        return -x * std::log(x) / (1.0 - x);
      };
    case VariantId::lottery: {
      const VariantParams captured = params;
      return [captured](double x) { return detail::identity_or_y(captured, x); };
    }
    case VariantId::penalty: {
      const double b = params.b;
      return [b](double x) { return x * (b * (x - 1.0) + 1.0); };
    }
    default:
      return [](double x) { return x; };
  }
}

double composite_limit(VariantId id, const VariantParams&, double x, double fx) {
  switch (id) {
    case VariantId::random_n:
      return (1.0 - x) * fx;
    case VariantId::wildcard:
      return 0.5 * x + (1.0 - x) * fx;
    case VariantId::interruption:
      return std::exp(-x) * fx;
    default:
      return fx;
  }
}

}  // namespace stoprule
