#include "continuized/baselines.hpp"
#include "continuized/continuized.hpp"
#include "continuized/errors.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace continuized;

namespace {

Vector vec(std::initializer_list<double> v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double d : v) out[i++] = d;
    return out;
}

}  // namespace

TEST_CASE("closed-form mixing matches numerical integration") {
    SUBCASE("constant rate") {
        const ParamSchedule s = ParamSchedule::strongly_convex(1.0, 0.09);
        CoupledState st = CoupledState::at(vec({1.0, 0.0, -2.0}), vec({0.0, 4.0, 1.0}));
        st.t = 0.4;
        const CoupledState out = mix_closed_form(st, s, 3.1);
        Vector x = st.x, z = st.z;
        oracle::rk4_mix(x, z, 0.4, 3.1, 1e-4, [](double) { return 0.3; }, [](double) { return 0.3; });
        CHECK((out.x - x).norm() < 1e-8);
        CHECK((out.z - z).norm() < 1e-8);
        CHECK(out.t == 3.1);
        // Midpoint preserved, long-run limit is the midpoint.
        CHECK(((out.x + out.z) - (st.x + st.z)).norm() < 1e-12);
        const CoupledState far = mix_closed_form(st, s, 1e4);
        CHECK((far.x - 0.5 * (st.x + st.z)).norm() < 1e-12);
    }
    SUBCASE("vanishing rate") {
        const ParamSchedule s = ParamSchedule::convex(1.0);
        CoupledState st = CoupledState::at(vec({1.0, 2.0}), vec({-1.0, 0.5}));
        st.t = 0.25;
        const CoupledState out = mix_closed_form(st, s, 2.0);
        Vector x = st.x, z = st.z;
        oracle::rk4_mix(x, z, 0.25, 2.0, 1e-4, [](double t) { return 2.0 / t; }, [](double) { return 0.0; });
        CHECK((out.x - x).norm() < 1e-8);
        CHECK(out.z == st.z);
        // From t = 0 the flow collapses x onto z.
        CoupledState zero = CoupledState::at(vec({3.0, 3.0}), vec({-1.0, 0.5}));
        CHECK(mix_closed_form(zero, s, 0.1).x == zero.z);
    }
    SUBCASE("no-op and backwards") {
        const ParamSchedule s = ParamSchedule::strongly_convex(1.0, 0.01);
        CoupledState st = CoupledState::at(vec({1.0}), vec({2.0}));
        st.t = 1.0;
        CHECK(mix_closed_form(st, s, 1.0).x == st.x);
        CHECK_THROWS_AS(mix_closed_form(st, s, 0.5), InvalidArgument);
    }
}

TEST_CASE("gradient jump") {
    CoupledState st = CoupledState::at(vec({1.0, 1.0}), vec({2.0, 2.0}));
    const CoupledState out = gradient_jump(st, 0.5, 2.0, vec({1.0, -1.0}), 3.0);
    CHECK(out.x == vec({-0.5, 2.5}));
    CHECK(out.z == vec({0.0, 4.0}));
    CHECK(out.event_count == 1);
    CHECK_THROWS_AS(gradient_jump(st, 0.5, 2.0, vec({1.0}), 1.0), DimensionMismatch);
    CHECK_THROWS_AS(CoupledState::at(vec({1.0}), vec({1.0, 2.0})), DimensionMismatch);
}

TEST_CASE("event snapshots follow the three-sequence recursion") {
    const ConvexProblem p = appendix_strongly_convex_problem();
    for (const ParamSchedule& s : {ParamSchedule::convex(1.0), ParamSchedule::strongly_convex(1.0, 0.01)}) {
        RunRng rng(99);
        Vector x = Vector::Zero(3), z = Vector::Zero(3);
        double t_prev = 0.0;
        std::size_t n = 0;
        double worst = 0.0;
        RunOptions opt;
        opt.on_event = [&](const EventSnapshot& e) {
            const Vector y = nesterov_step(p, x, z, discrete_params(s, t_prev, e.time));
            worst = std::max({worst, (y - e.y).norm(), (x - e.x).norm(), (z - e.z).norm()});
            t_prev = e.time;
            ++n;
        };
        run_continuized(p, NoiseModel::none(), s, EventClock::exponential(), 60.0, rng, opt);
        CHECK(n > 20);
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("runs are reproducible and checkpoints do not perturb them") {
    const ConvexProblem p = appendix_strongly_convex_problem();
    const ParamSchedule s = ParamSchedule::strongly_convex(1.0, 0.01);
    RunRng a(5), b(5);
    RunOptions with;
    with.checkpoints = log_spaced(1.0, 30.0, 20);
    const auto ra = run_continuized(p, NoiseModel::additive(0.01), s, EventClock::exponential(), 30.0, a, with);
    const auto rb = run_continuized(p, NoiseModel::additive(0.01), s, EventClock::exponential(), 30.0, b);
    CHECK(ra.terminal.x == rb.terminal.x);
    CHECK(ra.terminal.z == rb.terminal.z);
    CHECK(ra.terminal.t == 30.0);
    CHECK(ra.trace.checkpoints.size() == 20);
    CHECK(rb.trace.checkpoints.empty());
    // The noise draws come from the mark stream: the event count matches the noiseless run.
    RunRng c(5);
    const auto rc = run_continuized(p, NoiseModel::none(), s, EventClock::exponential(), 30.0, c);
    CHECK(rc.terminal.event_count == ra.terminal.event_count);
}

TEST_CASE("checkpoint metrics are evaluated on the mixed state") {
    const ConvexProblem p = appendix_strongly_convex_problem();
    const ParamSchedule s = ParamSchedule::strongly_convex(1.0, 0.01);
    RunRng rng(2);
    RunOptions opt;
    opt.checkpoints = {0.0, 5.0};
    opt.record_events = true;
    const auto r = run_continuized(p, NoiseModel::none(), s, EventClock::exponential(), 5.0, rng, opt);
    REQUIRE(r.trace.checkpoints.size() == 2);
    CHECK(r.trace.checkpoints[0].values[0] == doctest::Approx(0.52));
    CHECK(r.trace.checkpoints[0].k == 0);
    CHECK(r.trace.checkpoints[1].values[0] == doctest::Approx(p.gap(r.terminal.x)).epsilon(1e-14));
    CHECK(r.trace.checkpoints[1].k == r.terminal.event_count);
    CHECK(r.trace.events.size() == r.terminal.event_count);
    CHECK(r.trace.metric_index("dist2") == 1);
    CHECK_THROWS_AS(r.trace.metric_index("nope"), InvalidArgument);
}

TEST_CASE("argument validation") {
    const ConvexProblem p = appendix_strongly_convex_problem();
    RunRng rng(1);
    CHECK_THROWS_AS(run_continuized(p, NoiseModel::none(), ParamSchedule::convex(1.0), EventClock::exponential(),
                                    10.0, rng, Vector::Zero(3), Vector::Ones(3)),
                    InvalidArgument);
    CHECK_THROWS_AS(run_continuized(p, NoiseModel::none(), ParamSchedule::convex(1.0), EventClock::exponential(),
                                    10.0, rng, Vector::Zero(2), Vector::Zero(2)),
                    DimensionMismatch);
    RunOptions bad;
    bad.checkpoints = {2.0, 1.0};
    CHECK_THROWS_AS(run_continuized(p, NoiseModel::none(), ParamSchedule::convex(1.0), EventClock::exponential(),
                                    10.0, rng, bad),
                    InvalidArgument);
    bad.checkpoints = {20.0};
    CHECK_THROWS_AS(run_continuized(p, NoiseModel::none(), ParamSchedule::convex(1.0), EventClock::exponential(),
                                    10.0, rng, bad),
                    InvalidArgument);
    CHECK_THROWS_AS(run_continuized(p, NoiseModel::multiplicative(), ParamSchedule::convex(1.0),
                                    EventClock::exponential(), 10.0, rng),
                    InvalidArgument);
    CHECK_THROWS_AS(run_continuized(p, NoiseModel::none(), ParamSchedule::convex(1.0), EventClock::exponential(),
                                    std::numeric_limits<double>::infinity(), rng),
                    InvalidArgument);
}

TEST_CASE("max_events stops the loop") {
    const ConvexProblem p = appendix_strongly_convex_problem();
    RunRng rng(4);
    RunOptions opt;
    opt.max_events = 7;
    const auto r = run_continuized(p, NoiseModel::none(), ParamSchedule::strongly_convex(1.0, 0.01),
                                   EventClock::exponential(), std::numeric_limits<double>::infinity(), rng, opt);
    CHECK(r.terminal.event_count == 7);
}

TEST_CASE("geometric clock with p = 1 steps at integer times") {
    const ConvexProblem p = appendix_strongly_convex_problem();
    RunRng rng(4);
    std::vector<double> times;
    RunOptions opt;
    opt.on_event = [&](const EventSnapshot& e) { times.push_back(e.time); };
    run_continuized(p, NoiseModel::none(), ParamSchedule::strongly_convex(1.0, 0.01), EventClock::geometric(1.0, 1.0),
                    10.0, rng, opt);
    REQUIRE(times.size() == 10);
    for (std::size_t i = 0; i < times.size(); ++i) CHECK(times[i] == doctest::Approx(i + 1.0));
}

TEST_CASE("strongly convex ensemble respects its bound at t = 50") {
    const ConvexProblem p = appendix_strongly_convex_problem();
    const ParamSchedule s = ParamSchedule::strongly_convex(1.0, 0.01);
    double sum = 0.0;
    const int runs = 1000;
    for (int i = 0; i < runs; ++i) {
        RunRng rng(run_seed(3, i));
        RunOptions opt;
        opt.checkpoints = {50.0};
        sum += run_continuized(p, NoiseModel::none(), s, EventClock::exponential(), 50.0, rng, opt)
                   .trace.checkpoints[0]
                   .values[0];
    }
    const double bound = (0.52 + 0.005 * 3.0) * std::exp(-0.1 * 50.0);
    CHECK(sum / runs <= bound);
}

TEST_CASE("Lyapunov value") {
    const ConvexProblem p = appendix_strongly_convex_problem();
    CoupledState st = CoupledState::at(Vector::Zero(3), Vector::Zero(3));
    const double v = lyapunov_value(st, lyapunov_coeffs(ParamSchedule::strongly_convex(1.0, 0.01), 0.0), p);
    CHECK(v == doctest::Approx(0.52 + 0.005 * 3.0));
    CHECK_THROWS_AS(lyapunov_value(st, lyapunov_coeffs(ParamSchedule::multiplicative_convex(1.0, 1.0), 1.0), p),
                    InvalidArgument);
}

TEST_CASE("coordinate descent") {
    const std::vector<double> diag{1.0, 0.25, 4.0};
    const ConvexProblem p = make_quadratic(diag, std::vector<double>{1.0, -1.0, 2.0});
    const std::vector<double> probs{0.25, 0.25, 0.5};
    const double L = coordinate_smoothness(diag, probs);
    CHECK(L == doctest::Approx(16.0));
    CHECK_THROWS_AS(coordinate_smoothness(diag, {0.5, 0.5}), DimensionMismatch);

    RunRng rng(12);
    const auto r = run_coordinate(p, probs, ParamSchedule::coordinate_strongly_convex(L, 0.25), 400.0, rng,
                                  Vector::Zero(3));
    CHECK(p.gap(r.terminal.x) < 1e-6);

    // Ensemble mean against the coordinate-descent bound.
    const ParamSchedule cs = ParamSchedule::coordinate_convex(L);
    double sum = 0.0;
    for (int i = 0; i < 400; ++i) {
        RunRng g(run_seed(1, i));
        RunOptions o;
        o.checkpoints = {30.0};
        sum += run_coordinate(p, probs, cs, 30.0, g, Vector::Zero(3), o).trace.checkpoints[0].values[0];
    }
    CHECK(sum / 400 <= 2.0 * L * p.optimum.squaredNorm() / (30.0 * 30.0));
    CHECK_THROWS_AS(run_coordinate(p, {0.5, 0.5, 0.5}, cs, 1.0, rng, Vector::Zero(3)), InvalidArgument);
}

TEST_CASE("log and linear grids") {
    const auto g = log_spaced(1.0, 100.0, 3);
    CHECK(g[0] == 1.0);
    CHECK(g[1] == doctest::Approx(10.0));
    CHECK(g[2] == 100.0);
    CHECK(lin_spaced(0.0, 1.0, 5)[1] == doctest::Approx(0.25));
    CHECK(log_spaced(1.0, 5.0, 1) == std::vector<double>{5.0});
    CHECK_THROWS_AS(log_spaced(0.0, 5.0, 3), InvalidArgument);
}
