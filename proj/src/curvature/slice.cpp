#include "curvature/slice.hpp"

#include "numcore/rng.hpp"

namespace lesam::curvature {

using numcore::CounterRng;

namespace {

void check_opts(const SliceOptions& opts) {
  if (opts.dims != 1 && opts.dims != 2) throw Error(Errc::invalid_argument, "landscape_slice: dims must be 1 or 2");
  if (opts.grid < 3 || opts.grid % 2 == 0) {
    throw Error(Errc::invalid_argument, "landscape_slice: grid must be odd and >= 3");
  }
  if (opts.span <= 0.0) throw Error(Errc::invalid_argument, "landscape_slice: span must be positive");
}

// Filter normalization: every parameter group of the direction is rescaled
// to the norm of the matching group of w. Groups of w with zero norm map to
// zero direction entries.
void filter_normalize(Vec& dir, const Vec& w, const std::vector<numcore::ParamGroup>& groups) {
  for (const auto& g : groups) {
    double wn = w.segment(g.offset, g.length).norm();
    double dn = dir.segment(g.offset, g.length).norm();
    if (dn == 0.0) {
      if (wn != 0.0) throw Error(Errc::zero_direction, "landscape_slice: zero direction group");
      continue;
    }
    dir.segment(g.offset, g.length) *= (wn / dn);
  }
}

std::vector<double> symmetric_coords(int grid, double span) {
  std::vector<double> xs(static_cast<size_t>(grid));
  int c = (grid - 1) / 2;
  for (int i = 0; i < grid; ++i) {
    xs[static_cast<size_t>(i)] = span * static_cast<double>(i - c) / static_cast<double>(c);
  }
  return xs;
}

}  // namespace

LandscapeSlice landscape_slice_along(const Objective& obj, const Vec& w, const Batch& b,
                                     std::vector<Vec> raw_directions, const SliceOptions& opts) {
  check_opts(opts);
  if (static_cast<int>(raw_directions.size()) != opts.dims) {
    throw Error(Errc::invalid_argument, "landscape_slice: direction count != dims");
  }
  auto groups = obj.param_groups();
  for (Vec& dir : raw_directions) {
    numcore::require_same_dim(dir, w, "landscape_slice");
    filter_normalize(dir, w, groups);
  }

  LandscapeSlice out;
  out.dims = opts.dims;
  out.directions = std::move(raw_directions);
  out.alphas = symmetric_coords(opts.grid, opts.span);

  if (opts.dims == 1) {
    out.losses.reserve(out.alphas.size());
    for (double a : out.alphas) {
      out.losses.push_back(a == 0.0 ? obj.loss(w, b) : obj.loss(w + a * out.directions[0], b));
    }
  } else {
    out.betas = out.alphas;
    out.losses.reserve(out.alphas.size() * out.betas.size());
    for (double a : out.alphas) {
      for (double bb : out.betas) {
        if (a == 0.0 && bb == 0.0) {
          out.losses.push_back(obj.loss(w, b));
        } else {
          out.losses.push_back(obj.loss(w + a * out.directions[0] + bb * out.directions[1], b));
        }
      }
    }
  }
  return out;
}

LandscapeSlice landscape_slice(const Objective& obj, const Vec& w, const Batch& b,
                               const SliceOptions& opts) {
  check_opts(opts);
  CounterRng rng(opts.seed, 0x511CEull);
  std::vector<Vec> dirs;
  dirs.reserve(static_cast<size_t>(opts.dims));
  for (int i = 0; i < opts.dims; ++i) dirs.push_back(rng.gauss_vec(static_cast<int>(w.size())));
  return landscape_slice_along(obj, w, b, std::move(dirs), opts);
}

}  // namespace lesam::curvature
