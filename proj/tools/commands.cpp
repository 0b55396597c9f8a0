#include "cli.hpp"

#include "ng/busemann.hpp"
#include "ng/domain.hpp"
#include "ng/finsler.hpp"
#include "ng/immersions.hpp"
#include "ng/parallel.hpp"
#include "ng/pencils.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace ng::cli {

namespace {

RootSystem system_for(const std::string& family, int n) {
  const Family f = family_from_string(family);
  return RootSystem(f, f == Family::A ? n - 1 : n);
}

IdealPoint line_point(const Vec& c, const Vec& tau) {
  const Mat q = Eigen::HouseholderQR<Mat>(Mat(c.normalized())).householderQ();
  return make_ideal(FlagPoint::from_vectors(q, {1}), tau);
}

std::string join(const std::vector<int>& v, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

Json components_json(const std::vector<BaseComponent>& cs) {
  Json out = Json::array();
  for (const auto& c : cs)
    out.push_back({{"component_id", c.id}, {"size", c.size}, {"mean_residual", c.mean_residual},
                   {"local_dim", c.local_dim}, {"kind", c.kind}});
  return out;
}

Mat parse_matrix(const std::string& s, int n) {
  const auto v = parse_numbers(s);
  if (static_cast<int>(v.size()) != n * n) throw InputError("matrix needs " + std::to_string(n * n) + " entries");
  return Eigen::Map<const Eigen::Matrix<double, -1, -1, Eigen::RowMajor>>(v.data(), n, n);
}

void check_n(int n) {
  if (n < 2 || n > RootSystem::kMaxRank + 1) throw InputError("n must be in [2, 7]");
}

// ---- commands ----

void add_roots(CLI::App& app, Runner& sel) {
  struct O {
    std::string family = "A";
    int n = 3;
  };
  auto o = std::make_shared<O>();
  auto* c = app.add_subcommand("roots", "Weyl orbits of simple roots and their normalized coroots");
  c->add_option("--family", o->family, "A, B, C or D")->capture_default_str();
  c->add_option("--n", o->n, "matrix size for A, rank otherwise")->capture_default_str();
  c->callback([o, &sel] {
    sel = [o](const Context& ctx) {
      const RootSystem sys = system_for(o->family, o->n);
      CsvWriter w(ctx.path("roots.csv"), [&] {
        std::vector<std::string> h{"orbit", "simple_roots"};
        for (auto& s : numbered("coroot", sys.ambient_dim())) h.push_back(s);
        return h;
      }());
      Json orbits = Json::array();
      const auto os = weyl_orbits_of_simple_roots(sys);
      std::printf("%s rank %d: %zu orbit(s)\n", to_string(sys.family()).c_str(), sys.rank(), os.size());
      for (std::size_t k = 0; k < os.size(); ++k) {
        const Vec t = normalized_coroot(sys, os[k]);
        w << "O" + std::to_string(k + 1) << join(os[k]);
        for (int i = 0; i < t.size(); ++i) w << t(i);
        w.end_row();
        orbits.push_back({{"name", "O" + std::to_string(k + 1)}, {"simple_roots", os[k]}, {"coroot", to_json(t)}});
        std::printf("  O%zu: simple roots {%s}  coroot (", k + 1, join(os[k], ",").c_str());
        for (int i = 0; i < t.size(); ++i) std::printf("%s%.6g", i ? ", " : "", t(i));
        std::printf(")\n");
      }
      Json ex = Json::array();
      for (const auto& r : exceptional_table()) ex.push_back({{"name", r.name}, {"orbits", r.orbits}});
      write_json(ctx.path("roots.json"), {{"family", to_string(sys.family())}, {"rank", sys.rank()}, {"orbits", orbits},
                                          {"exceptional", ex}});
      return 0;
    };
  });
}

void add_c_theta(CLI::App& app, Runner& sel) {
  struct O {
    std::string family = "A", orbit = "Delta";
    int n = 3;
  };
  auto o = std::make_shared<O>();
  auto* c = app.add_subcommand("c-theta", "Constant c_Theta of a union of Weyl orbits of simple roots");
  c->add_option("--family", o->family, "A, B, C or D")->capture_default_str();
  c->add_option("--n", o->n, "matrix size for A, rank otherwise")->capture_default_str();
  c->add_option("--orbit", o->orbit, "Delta, Ok (k-th orbit) or simple root indices i,j")->capture_default_str();
  c->callback([o, &sel] {
    sel = [o](const Context& ctx) {
      const RootSystem sys = system_for(o->family, o->n);
      const auto orbit = parse_orbit(sys, o->orbit);
      const double v = compute_c_theta(sys, orbit);
      std::printf("c_theta(%s, n=%d, {%s}) = %.12g\n", o->family.c_str(), o->n, join(orbit, ",").c_str(), v);
      write_json(ctx.path("c_theta.json"),
                 {{"family", o->family}, {"n", o->n}, {"orbit", orbit}, {"c_theta", v}});
      return 0;
    };
  });
}

void add_busemann(CLI::App& app, Runner& sel) {
  struct O {
    int n = 3, count = 100;
    std::string tau = "Delta";
    double spread = 1.0, step = 1e-4;
  };
  auto o = std::make_shared<O>();
  auto* c = app.add_subcommand("busemann", "Batch Busemann values with finite-difference gradient checks");
  c->add_option("--n", o->n)->capture_default_str();
  c->add_option("--count", o->count)->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--tau", o->tau, "Delta, tauK, orbit:i,j or coordinates")->capture_default_str();
  c->add_option("--spread", o->spread, "scale of random points")->capture_default_str();
  c->add_option("--step", o->step, "finite-difference step")->capture_default_str();
  c->callback([o, &sel] {
    sel = [o](const Context& ctx) {
      check_n(o->n);
      const Vec tau = parse_tau(RootSystem::sl(o->n), o->tau);
      const SymPoint origin = SymPoint::origin(o->n);
      std::vector<IdealPoint> as;
      std::vector<SymPoint> xs;
      std::vector<SymTangent> vs;
      for (int i = 0; i < o->count; ++i) {
        Rng rng = stream(ctx.seed, i);
        as.push_back(make_ideal(random_flag(o->n, type_of_weights(tau), rng), tau));
        xs.push_back(random_point(o->n, o->spread, rng));
        vs.push_back(random_tangent(xs.back(), rng));
      }
      const auto values = busemann_batch(as, origin, xs, ctx.exec());
      CsvWriter w(ctx.path("busemann.csv"), {"index", "value", "directional", "finite_difference", "error"});
      double worst = 0;
      for (int i = 0; i < o->count; ++i) {
        const double dir = inner(busemann_gradient(as[i], origin, xs[i]), vs[i]);
        const double fd = (busemann_value(as[i], origin, geodesic(xs[i], vs[i], o->step)) -
                           busemann_value(as[i], origin, geodesic(xs[i], vs[i], -o->step))) /
                          (2 * o->step);
        worst = std::max(worst, std::abs(fd - dir));
        w << i << values[i] << dir << fd << std::abs(fd - dir);
        w.end_row();
      }
      std::printf("%d Busemann values; max |gradient - finite difference| = %.3g\n", o->count, worst);
      write_json(ctx.path("busemann.json"), {{"n", o->n}, {"tau", to_json(tau)}, {"count", o->count}, {"max_fd_error", worst}});
      return 0;
    };
  });
}

void add_finsler(CLI::App& app, Runner& sel) {
  struct O {
    int n = 3, pairs = 20, sup = 0;
    std::string tau = "Delta", x, y;
    double spread = 1.0;
  };
  auto o = std::make_shared<O>();
  auto* c = app.add_subcommand("finsler-dist", "Finsler distances, reversed distances and sampled sup characterization");
  c->add_option("--n", o->n)->capture_default_str();
  c->add_option("--tau", o->tau)->capture_default_str();
  c->add_option("--pairs", o->pairs, "random pairs when --x/--y are absent")->capture_default_str();
  c->add_option("--spread", o->spread)->capture_default_str();
  c->add_option("--sup-samples", o->sup, "flags for the Busemann sup (0 skips)")->capture_default_str();
  c->add_option("--x", o->x, "Gram matrix, row-major");
  c->add_option("--y", o->y, "Gram matrix, row-major");
  c->callback([o, &sel] {
    sel = [o](const Context& ctx) {
      check_n(o->n);
      const RootSystem sys = RootSystem::sl(o->n);
      const FinslerContext fc = make_finsler_context(sys, parse_tau(sys, o->tau));
      std::vector<std::pair<SymPoint, SymPoint>> pairs;
      if (!o->x.empty() || !o->y.empty()) {
        if (o->x.empty() || o->y.empty()) throw InputError("--x and --y go together");
        pairs.emplace_back(SymPoint::from_gram(parse_matrix(o->x, o->n)), SymPoint::from_gram(parse_matrix(o->y, o->n)));
      } else {
        for (int i = 0; i < o->pairs; ++i) {
          Rng rng = stream(ctx.seed, i);
          const SymPoint x = random_point(o->n, o->spread, rng);
          pairs.emplace_back(x, random_point(o->n, o->spread, rng));
        }
      }
      auto h = std::vector<std::string>{"index", "distance", "reverse", "sup_sampled", "sup_refined"};
      for (auto& s : numbered("cartan", o->n)) h.push_back(s);
      CsvWriter w(ctx.path("finsler.csv"), h);
      double worst_gap = 0;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& [x, y] = pairs[i];
        const double d = finsler_distance(fc, x, y);
        double s = NAN, r = NAN;
        if (o->sup > 0) {
          const BusemannSup bs = busemann_sup(fc, x, y, o->sup, ctx.seed + i, ctx.exec());
          s = bs.sampled;
          r = bs.refined;
          worst_gap = std::max(worst_gap, std::abs(r - d));
        }
        w << static_cast<long>(i) << d << finsler_distance(fc, y, x) << s << r;
        const Vec cart = generalized_distance(x, y);
        for (int k = 0; k < cart.size(); ++k) w << cart(k);
        w.end_row();
      }
      std::printf("%zu distance(s) written", pairs.size());
      if (o->sup > 0) std::printf("; max |refined sup - distance| = %.3g", worst_gap);
      std::printf("\n");
      return 0;
    };
  });
}

void add_project(CLI::App& app, Runner& sel) {
  struct O {
    int n = 3, count = 10, max_iter = 400;
    std::string tau = "Delta", surface = "irr", start = "0,1";
    double spread = 1.0, tol = 1e-6;
  };
  auto o = std::make_shared<O>();
  auto* c = app.add_subcommand("project", "Finsler nearest-point projection of random points to a surface");
  c->add_option("--n", o->n)->capture_default_str();
  c->add_option("--tau", o->tau)->capture_default_str();
  c->add_option("--surface", o->surface, "irr, red or csv:PATH")->capture_default_str();
  c->add_option("--count", o->count)->capture_default_str();
  c->add_option("--spread", o->spread)->capture_default_str();
  c->add_option("--start", o->start, "initial point re,im")->capture_default_str();
  c->add_option("--max-iter", o->max_iter)->capture_default_str();
  c->add_option("--tol", o->tol)->capture_default_str();
  c->callback([o, &sel] {
    sel = [o](const Context& ctx) {
      check_n(o->n);
      const auto u = make_surface(o->surface, o->n);
      const RootSystem sys = RootSystem::sl(u->dim());
      const FinslerContext fc = make_finsler_context(sys, parse_tau(sys, o->tau));
      const ProjectionOptions po{parse_point(o->start), o->max_iter, o->tol};
      std::vector<SymPoint> xs;
      for (int i = 0; i < o->count; ++i) {
        Rng rng = stream(ctx.seed, i);
        xs.push_back(random_point(u->dim(), o->spread, rng));
      }
      std::vector<Projection> ps(xs.size());
      std::vector<std::string> status(xs.size());
      for_each_index(static_cast<long>(xs.size()), ctx.exec(), [&](long i) {
        try {
          ps[i] = nearest_point_projection(fc, *u, xs[i], po);
          status[i] = ps[i].iterations < po.max_iter ? "converged" : "max_iter";
        } catch (const NumericalError& e) {
          status[i] = "failed";
        }
      });
      CsvWriter w(ctx.path("project.csv"), {"index", "z_re", "z_im", "value", "residual", "iterations", "status"});
      long ok = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        w << static_cast<long>(i) << ps[i].z.real() << ps[i].z.imag() << ps[i].value << ps[i].residual << ps[i].iterations
          << status[i];
        w.end_row();
        ok += status[i] == "converged";
      }
      std::printf("%ld/%zu projections converged\n", ok, xs.size());
      if (ok == 0 && !xs.empty()) throw NumericalError("no projection converged");
      return 0;
    };
  });
}

void add_pencil_base(CLI::App& app, Runner& sel) {
  struct O {
    std::string preset, quadrics, tau = "Delta";
    int samples = 2000;
    double radius = 0.05;
  };
  auto o = std::make_shared<O>();
  auto* c = app.add_subcommand("pencil-base", "tau-base of a pencil of quadrics, clustered into components");
  auto* p = c->add_option("--preset", o->preset, "P_red or P_irr");
  c->add_option("--quadrics", o->quadrics, "CSV quad,row,col,value")->excludes(p);
  c->add_option("--tau", o->tau, "tau1 gives the projective base")->capture_default_str();
  c->add_option("--samples", o->samples)->capture_default_str();
  c->add_option("--radius", o->radius, "clustering radius")->capture_default_str();
  c->callback([o, &sel] {
    sel = [o](const Context& ctx) {
      QuadricPencil q;
      if (!o->preset.empty())
        q = preset_pencil(o->preset);
      else if (!o->quadrics.empty())
        q.quads = read_quadrics_csv(o->quadrics);
      else
        throw InputError("pencil-base needs --preset or --quadrics");
      validate(q);
      const int n = q.dim();
      const RootSystem sys = RootSystem::sl(n);
      const Vec tau = parse_tau(sys, o->tau);
      BaseOptions bo;
      bo.samples = o->samples;
      bo.radius = o->radius;
      bo.seed = ctx.seed;
      bo.exec = ctx.exec();
      write_quadrics_csv(ctx.path("quadrics.csv"), q.quads);
      Json j{{"n", n}, {"tau", to_json(tau)}};
      std::vector<BaseComponent> comps;
      if ((tau - fundamental_direction(sys, 0)).norm() < 1e-9) {
        const ProjectiveBase b = base_projective(q, bo);
        auto h = std::vector<std::string>{"component"};
        for (auto& s : numbered("x", n)) h.push_back(s);
        CsvWriter w(ctx.path("base.csv"), h);
        for (std::size_t i = 0; i < b.points.size(); ++i) {
          w << b.labels[i];
          for (int k = 0; k < n; ++k) w << b.points[i](k);
          w.end_row();
        }
        comps = b.components;
        j["method"] = b.method;
        j["dropped"] = b.dropped;
      } else {
        const FlagBase b = base_flags(tangent_pencil(q), tau, bo);
        auto h = std::vector<std::string>{"component"};
        for (auto& s : numbered("b", n * n)) h.push_back(s);
        CsvWriter w(ctx.path("base.csv"), h);
        for (std::size_t i = 0; i < b.flags.size(); ++i) {
          w << b.labels[i];
          write_flag(w, b.flags[i]);
          w.end_row();
        }
        comps = b.components;
        j["method"] = "sampled";
        j["dropped"] = b.dropped;
        if (!b.warning.empty()) j["warning"] = b.warning;
      }
      j["components"] = components_json(comps);
      write_json(ctx.path("base.json"), j);
      std::printf("%zu component(s):", comps.size());
      for (const auto& cp : comps) std::printf(" %s(%ld, dim %d)", cp.kind.c_str(), cp.size, cp.local_dim);
      std::printf("\n");
      return 0;
    };
  });
}

void add_segre(CLI::App& app, Runner& sel) {
  struct O {
    int fuchsian = 0;
    std::string pencil;
  };
  auto o = std::make_shared<O>();
  auto* c = app.add_subcommand("segre", "Segre symbol of a 2-pencil of quadrics");
  auto* f = c->add_option("--fuchsian", o->fuchsian, "k: Hermitian pencil of the 2k-dimensional representation");
  c->add_option("--pencil", o->pencil, "CSV quad,row,col,value with two quadrics")->excludes(f);
  c->callback([o, &sel] {
    sel = [o](const Context& ctx) {
      SegreSymbol s;
      Json j;
      if (o->fuchsian > 0) {
        const FuchsianPencil fp = fuchsian_pencil(o->fuchsian);
        s = segre_symbol(fp.q1, fp.q2);
        const Mat nil = fp.t - Mat::Identity(fp.t.rows(), fp.t.cols());
        j["k"] = o->fuchsian;
        j["nilpotency_order"] = nilpotency_order(nil);
      } else if (!o->pencil.empty()) {
        const auto q = read_quadrics_csv(o->pencil);
        if (q.size() != 2) throw InputError("segre needs exactly two quadrics");
        s = segre_symbol(q[0], q[1]);
      } else {
        throw InputError("segre needs --fuchsian or --pencil");
      }
      CsvWriter w(ctx.path("segre.csv"), {"re", "im", "multiplicity", "partition"});
      Json entries = Json::array();
      for (const auto& e : s.entries) {
        w << e.value.real() << e.value.imag() << e.multiplicity << join(e.partition);
        w.end_row();
        entries.push_back({{"re", e.value.real()}, {"im", e.value.imag()}, {"multiplicity", e.multiplicity},
                           {"partition", e.partition}});
        std::printf("  %.6g%+.6gi  multiplicity %d  blocks [%s]\n", e.value.real(), e.value.imag(), e.multiplicity,
                    join(e.partition, ",").c_str());
      }
      j["entries"] = entries;
      j["real_members_nondegenerate"] = s.real_members_nondegenerate;
      write_json(ctx.path("segre.json"), j);
      return 0;
    };
  });
}

void add_check_ng(CLI::App& app, Runner& sel) {
  struct O {
    int n = 3, directions = 48, flags = 48;
    std::string surface = "irr", tau = "Delta", y = "0,1", orbit;
    double perturb = 0.0;
  };
  auto o = std::make_shared<O>();
  auto* c = app.add_subcommand("check-ng", "Nearly geodesic criterion report at a surface point");
  c->add_option("--n", o->n)->capture_default_str();
  c->add_option("--surface", o->surface, "irr, red or csv:PATH")->capture_default_str();
  c->add_option("--tau", o->tau)->capture_default_str();
  c->add_option("--y", o->y, "surface point re,im")->capture_default_str();
  c->add_option("--directions", o->directions)->capture_default_str();
  c->add_option("--flags", o->flags, "flags per direction")->capture_default_str();
  c->add_option("--perturb", o->perturb, "replace the surface by a perturbed 2-jet at i (written to jet.csv)")
      ->capture_default_str();
  c->add_option("--sufficient", o->orbit, "also run the sufficient condition for this orbit (Delta, Ok, i,j)");
  c->callback([o, &sel] {
    sel = [o](const Context& ctx) {
      std::unique_ptr<Surface> u = make_surface(o->surface, o->n);
      if (o->perturb > 0) {
        Rng rng = stream(ctx.seed, 0);
        SurfaceJet jet = perturbed_jet(*u, o->perturb, rng);
        std::ofstream out(ctx.path("jet.csv"));
        write_jet_csv(out, jet);
        u = std::make_unique<JetSurface>(std::move(jet));
      }
      const RootSystem sys = RootSystem::sl(u->dim());
      CriterionOptions co;
      co.directions = o->directions;
      co.flags_per_direction = o->flags;
      co.seed = ctx.seed;
      co.exec = ctx.exec();
      const h2::Point y = parse_point(o->y);
      const CriterionReport r = nearly_geodesic_check(*u, y, parse_tau(sys, o->tau), co);
      Json j{{"tau", to_json(r.tau)}, {"y", {y.real(), y.imag()}},   {"margin", r.margin},
             {"ratio", r.ratio},      {"lambda", r.lambda},           {"samples", r.samples},
             {"critical", r.critical}, {"worst_theta", r.worst_theta}, {"passed", r.passed}};
      std::printf("margin %.6g  ratio %.6g  critical %ld/%ld  %s\n", r.margin, r.ratio, r.critical, r.samples,
                  r.passed ? "PASS" : "FAIL");
      if (!o->orbit.empty()) {
        const SufficientReport s = sufficient_condition_check(*u, y, parse_orbit(sys, o->orbit));
        j["sufficient"] = {{"holds", s.holds}, {"slack", s.slack}};
        std::printf("sufficient condition %s (slack %.6g)\n", s.holds ? "holds" : "fails", s.slack);
      }
      write_json(ctx.path("check_ng.json"), j);
      return 0;
    };
  });
}

void add_limit_cone(CLI::App& app, Runner& sel) {
  struct O {
    int n = 3, genus = 2, max_len = 6, min_len = 1, kmax = 12;
    std::string embedding = "irr", tau = "Delta", diagonal;
  };
  auto o = std::make_shared<O>();
  auto* c = app.add_subcommand("limit-cone", "Cartan directions of surface group words and Anosov fits");
  c->add_option("--n", o->n)->capture_default_str();
  c->add_option("--embedding", o->embedding, "irr or red")->capture_default_str();
  c->add_option("--genus", o->genus)->capture_default_str();
  c->add_option("--max-len", o->max_len)->capture_default_str();
  c->add_option("--min-len", o->min_len)->capture_default_str();
  c->add_option("--tau", o->tau)->capture_default_str();
  c->add_option("--diagonal", o->diagonal, "diagonal entries of g: also report wall angles of g^k");
  c->add_option("--kmax", o->kmax)->capture_default_str();
  c->callback([o, &sel] {
    sel = [o](const Context& ctx) {
      check_n(o->n);
      const Vec tau = parse_tau(RootSystem::sl(o->n), o->tau);
      LimitConeOptions lo;
      lo.max_len = o->max_len;
      lo.min_len = o->min_len;
      lo.exec = ctx.exec();
      const LimitConeReport r = limit_cone_sample(make_embedding(o->embedding, o->n), fuchsian_generators(o->genus), tau, lo);
      {
        auto h = std::vector<std::string>{"length"};
        for (auto& s : numbered("d", o->n)) h.push_back(s);
        CsvWriter w(ctx.path("directions.csv"), h);
        for (const auto& [len, d] : r.directions) {
          w << len;
          for (int k = 0; k < d.size(); ++k) w << d(k);
          w.end_row();
        }
      }
      CsvWriter w(ctx.path("wall_angles.csv"), {"length", "min_wall_angle"});
      for (std::size_t k = 1; k < r.wall_angle_by_length.size(); ++k) {
        w << static_cast<long>(k) << r.wall_angle_by_length[k];
        w.end_row();
      }
      Json fits = Json::array();
      for (const auto& f : r.fits) fits.push_back({{"b", f.b}, {"c", f.c}, {"violation_fraction", f.violation_fraction}});
      Json j{{"words", r.words}, {"min_wall_angle", r.min_wall_angle}, {"fits", fits}};
      std::printf("%ld words, min wall angle %.6g\n", r.words, r.min_wall_angle);
      for (std::size_t i = 0; i < r.fits.size(); ++i)
        std::printf("  alpha%zu: b = %.6g, c = %.6g, violations %.3g\n", i + 1, r.fits[i].b, r.fits[i].c,
                    r.fits[i].violation_fraction);
      if (!o->diagonal.empty()) {
        const auto d = parse_numbers(o->diagonal);
        if (static_cast<int>(d.size()) != o->n) throw InputError("--diagonal needs n entries");
        const Mat g = Vec::Map(d.data(), o->n).asDiagonal();
        const auto angles = cyclic_wall_angles(g, tau, o->kmax);
        j["cyclic_wall_angles"] = angles;
        std::printf("  diagonal g^%d wall angle %.6g\n", o->kmax, angles.back());
      }
      write_json(ctx.path("limit_cone.json"), j);
      return 0;
    };
  });
}

void add_domain_grid(CLI::App& app, Runner& sel) {
  struct O {
    std::string mode = "rp2", surface = "irr", tau = "Delta", input;
    int n = 3, count = 500;
  };
  auto o = std::make_shared<O>();
  auto* c = app.add_subcommand("domain-grid", "Classify ideal points by properness of Busemann functions on the surface");
  c->add_option("--mode", o->mode, "rp2 (lines of R^3, tau1) or flags (Haar flags of type tau)")
      ->capture_default_str()
      ->check(CLI::IsMember({"rp2", "flags"}));
  c->add_option("--surface", o->surface, "irr, red or csv:PATH")->capture_default_str();
  c->add_option("--n", o->n)->capture_default_str();
  c->add_option("--tau", o->tau, "flags mode only")->capture_default_str();
  c->add_option("--count", o->count)->capture_default_str();
  c->add_option("--input", o->input, "CSV with flag columns b0.. instead of generated points");
  c->callback([o, &sel] {
    sel = [o](const Context& ctx) {
      const auto u = make_surface(o->surface, o->n);
      const int n = u->dim();
      const RootSystem sys = RootSystem::sl(n);
      const bool rp2 = o->mode == "rp2";
      if (rp2 && n != 3) throw InputError("rp2 mode needs n = 3");
      const Vec tau = rp2 ? fundamental_direction(sys, 0) : parse_tau(sys, o->tau);
      std::vector<IdealPoint> as;
      if (!o->input.empty()) {
        for (const FlagPoint& f : read_flags_csv(o->input, type_of_weights(tau))) as.push_back(make_ideal(f, tau));
      } else if (rp2) {
        for (const Vec& v : projective_grid(o->count)) as.push_back(line_point(v, tau));
      } else {
        for (int i = 0; i < o->count; ++i) {
          Rng rng = stream(ctx.seed, i);
          as.push_back(make_ideal(random_flag(n, type_of_weights(tau), rng), tau));
        }
      }
      const auto qs = domain_membership_batch(as, *u, SymPoint::origin(n), DomainOptions{}, ctx.exec());
      auto h = numbered("b", n * n);
      if (rp2) h.push_back("form");
      for (const char* s : {"class", "reason", "value", "escape_slope", "z_re", "z_im"}) h.push_back(s);
      CsvWriter w(ctx.path("domain.csv"), h);
      long counts[3] = {0, 0, 0};
      for (std::size_t i = 0; i < as.size(); ++i) {
        write_flag(w, as[i].flag);
        if (rp2) w << veronese_form(canonical(as[i].flag).basis.col(0));
        w << to_string(qs[i].result) << qs[i].reason << qs[i].value << qs[i].escape_slope << qs[i].minimizer.real()
          << qs[i].minimizer.imag();
        w.end_row();
        ++counts[static_cast<int>(qs[i].result)];
      }
      std::printf("inside %ld  outside %ld  ambiguous %ld\n", counts[0], counts[1], counts[2]);
      write_json(ctx.path("domain.json"), {{"mode", o->mode}, {"tau", to_json(tau)}, {"inside", counts[0]},
                                           {"outside", counts[1]}, {"ambiguous", counts[2]}});
      return 2 * counts[2] > static_cast<long>(as.size()) ? kExitInconclusive : 0;
    };
  });
}

void add_fiber(CLI::App& app, Runner& sel) {
  struct O {
    std::string surface = "irr", tau = "Delta", y = "0,1";
    int n = 3, samples = 300, base_checks = 200;
  };
  auto o = std::make_shared<O>();
  auto* c = app.add_subcommand("fiber", "Fiber of the domain over a surface point against the pencil base");
  c->add_option("--surface", o->surface, "irr, red or csv:PATH")->capture_default_str();
  c->add_option("--n", o->n)->capture_default_str();
  c->add_option("--tau", o->tau)->capture_default_str();
  c->add_option("--y", o->y, "surface point re,im")->capture_default_str();
  c->add_option("--samples", o->samples)->capture_default_str();
  c->add_option("--base-checks", o->base_checks)->capture_default_str();
  c->callback([o, &sel] {
    sel = [o](const Context& ctx) {
      const auto u = make_surface(o->surface, o->n);
      const RootSystem sys = RootSystem::sl(u->dim());
      FiberOptions fo;
      fo.samples = o->samples;
      fo.base_checks = o->base_checks;
      fo.seed = ctx.seed;
      fo.exec = ctx.exec();
      const FiberReport r = fiber_vs_pencil_base(*u, parse_tau(sys, o->tau), parse_point(o->y), fo);
      const int n = u->dim();
      auto cloud = [&](const std::string& name, const std::vector<IdealPoint>& pts) {
        CsvWriter w(ctx.path(name), numbered("b", n * n));
        for (const auto& a : pts) {
          write_flag(w, a.flag);
          w.end_row();
        }
      };
      cloud("fiber.csv", r.fiber);
      cloud("base.csv", r.base);
      write_json(ctx.path("fiber.json"),
                 {{"y", {r.y.real(), r.y.imag()}}, {"fiber_points", r.fiber.size()}, {"base_points", r.base.size()},
                  {"candidates", r.candidates}, {"rejected", r.rejected}, {"fiber_to_base", r.fiber_to_base},
                  {"base_projection", r.base_projection}, {"matching_distance", r.matching_distance},
                  {"hausdorff", r.hausdorff}});
      std::printf("fiber %zu points, base %zu points, matching distance %.3g, hausdorff %.3g\n", r.fiber.size(),
                  r.base.size(), r.matching_distance, r.hausdorff);
      return 0;
    };
  });
}

void add_compare(CLI::App& app, Runner& sel) {
  struct O {
    std::string embedding = "irr", tau = "Delta", tau0 = "Delta";
    int n = 3, samples = 500, max_len = 6, perturbations = 8;
    double band = 0.02;
  };
  auto o = std::make_shared<O>();
  auto* c = app.add_subcommand("compare-domains", "Properness domain against the thickening domain of the limit flags");
  c->add_option("--embedding", o->embedding, "irr or red")->capture_default_str();
  c->add_option("--n", o->n)->capture_default_str();
  c->add_option("--tau", o->tau)->capture_default_str();
  c->add_option("--tau0", o->tau0, "thickening parameter")->capture_default_str();
  c->add_option("--samples", o->samples)->capture_default_str();
  c->add_option("--max-len", o->max_len, "word length for limit flags")->capture_default_str();
  c->add_option("--band", o->band)->capture_default_str();
  c->add_option("--perturbations", o->perturbations)->capture_default_str();
  c->callback([o, &sel] {
    sel = [o](const Context& ctx) {
      check_n(o->n);
      const RootSystem sys = RootSystem::sl(o->n);
      const EquivariantSurface u(make_embedding(o->embedding, o->n));
      const auto boundary = boundary_flags(*u.embedding(), fuchsian_generators(2), o->max_len, 1e-3, ctx.exec());
      CompareOptions co;
      co.samples = o->samples;
      co.band = o->band;
      co.perturbations = o->perturbations;
      co.seed = ctx.seed;
      co.exec = ctx.exec();
      const DomainComparison r = compare_domains(u, parse_tau(sys, o->tau), parse_tau(sys, o->tau0), boundary, co);
      CsvWriter w(ctx.path("disagreements.csv"), numbered("b", o->n * o->n));
      for (const auto& a : r.disagreements) {
        write_flag(w, a.flag);
        w.end_row();
      }
      write_json(ctx.path("compare.json"),
                 {{"limit_flags", boundary.size()}, {"samples", r.samples}, {"in_band", r.in_band}, {"agree", r.agree},
                  {"disagree", r.disagree}, {"ambiguous", r.ambiguous}, {"agreement", r.agreement}});
      std::printf("agreement %.4f (%ld agree, %ld disagree, %ld in band, %ld ambiguous; %zu limit flags)\n", r.agreement,
                  r.agree, r.disagree, r.in_band, r.ambiguous, boundary.size());
      return 2 * r.ambiguous > r.samples ? kExitInconclusive : 0;
    };
  });
}

}  // namespace

void register_commands(CLI::App& app, Runner& sel) {
  add_roots(app, sel);
  add_c_theta(app, sel);
  add_busemann(app, sel);
  add_finsler(app, sel);
  add_project(app, sel);
  add_pencil_base(app, sel);
  add_segre(app, sel);
  add_check_ng(app, sel);
  add_limit_cone(app, sel);
  add_domain_grid(app, sel);
  add_fiber(app, sel);
  add_compare(app, sel);
}

}  // namespace ng::cli
