//! Property checks shared by the property suite and the acceptance run.
//! Each check drives a deterministic proptest runner and reports the first
//! counterexample as an error string.

#![allow(dead_code)]

use std::f64::consts::{PI, TAU};
use std::fmt::Debug;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestError, TestRng, TestRunner};
use swarmphase::dynamics::{integrate, resolve_collisions, step};
use swarmphase::macrostate::{classify_diffusion, classify_milling};
use swarmphase::markers::{avg_speed, circliness, nn_variance};
use swarmphase::phasediag::{color_for, signed_intensity, ColorRule, PhaseDiagram, Rgb};
use swarmphase::sweep::{init_connected_with, load_trials, write_trials, Axis, AxisName, InitConfig, ParamGrid};
use swarmphase::swarm::{in_fov, r_disk_connected, sense};
use swarmphase::{
    AgentState, Behavior, ControlInput, Controller, MarkerVector, Microstate, PhaseCell, SensorSpec,
    SimParams, StructureSet, TrialRecord,
};

pub type Check = Result<(), String>;

pub fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(
        Config {
            cases,
            failure_persistence: None,
            max_global_rejects: cases.saturating_mul(50).max(1024),
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    )
}

fn finish<T: Debug>(r: Result<(), TestError<T>>) -> Check {
    r.map_err(|e| e.to_string())
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

pub fn agent(extent: f64) -> impl Strategy<Value = AgentState> {
    (-extent..extent, -extent..extent, -PI..PI).prop_map(|(x, y, t)| AgentState::new(x, y, t))
}

pub fn microstate(n: std::ops::RangeInclusive<usize>, extent: f64) -> impl Strategy<Value = Microstate> {
    prop::collection::vec(agent(extent), n).prop_map(|a| Microstate::new(a, 0.0).unwrap())
}

fn positions(s: &Microstate) -> Vec<(f64, f64)> {
    s.agents().iter().map(|a| (a.x, a.y)).collect()
}

/// Rotation by `angle` about the origin, then translation.
#[derive(Debug, Clone, Copy)]
pub struct Rigid {
    pub angle: f64,
    pub tx: f64,
    pub ty: f64,
}

impl Rigid {
    pub fn point(&self, (x, y): (f64, f64)) -> (f64, f64) {
        let (s, c) = self.angle.sin_cos();
        (c * x - s * y + self.tx, s * x + c * y + self.ty)
    }

    pub fn agent(&self, a: &AgentState) -> AgentState {
        let (x, y) = self.point((a.x, a.y));
        AgentState::new(x, y, a.theta + self.angle)
    }

    pub fn state(&self, s: &Microstate) -> Microstate {
        Microstate::new(s.agents().iter().map(|a| self.agent(a)).collect(), s.time()).unwrap()
    }
}

pub fn rigid() -> impl Strategy<Value = Rigid> {
    (-PI..PI, -50.0..50.0, -50.0..50.0).prop_map(|(angle, tx, ty)| Rigid { angle, tx, ty })
}

fn angle_diff(a: f64, b: f64) -> f64 {
    (a - b + PI).rem_euclid(TAU) - PI
}

// ---- naive marker oracles ----

pub fn oracle_circliness(p: &[(f64, f64)]) -> f64 {
    let n = p.len() as f64;
    let mut cx = 0.0;
    let mut cy = 0.0;
    for &(x, y) in p {
        cx += x;
        cy += y;
    }
    cx /= n;
    cy /= n;
    let mut radii: Vec<f64> = p
        .iter()
        .map(|&(x, y)| ((x - cx) * (x - cx) + (y - cy) * (y - cy)).sqrt())
        .collect();
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let lo = radii[0];
    let hi = radii[radii.len() - 1];
    if lo < 1e-9 {
        f64::INFINITY
    } else {
        (hi - lo) / lo
    }
}

/// Variance as half the mean squared difference over all ordered pairs.
pub fn oracle_nn_variance(p: &[(f64, f64)]) -> f64 {
    if p.len() < 2 {
        return f64::INFINITY;
    }
    let nearest: Vec<f64> = (0..p.len())
        .map(|i| {
            let mut best = f64::INFINITY;
            for (j, q) in p.iter().enumerate() {
                if i != j {
                    let d = ((p[i].0 - q.0).powi(2) + (p[i].1 - q.1).powi(2)).sqrt();
                    if d < best {
                        best = d;
                    }
                }
            }
            best
        })
        .collect();
    let n = nearest.len() as f64;
    let mut acc = 0.0;
    for a in &nearest {
        for b in &nearest {
            acc += (a - b) * (a - b);
        }
    }
    acc / (2.0 * n * n)
}

pub fn oracle_avg_speed(a: &[(f64, f64)], b: &[(f64, f64)], gap: f64) -> f64 {
    let mut total = 0.0;
    for k in 0..a.len() {
        total += ((b[k].0 - a[k].0).powi(2) + (b[k].1 - a[k].1).powi(2)).sqrt();
    }
    total / a.len() as f64 / gap
}

pub fn markers_match_oracles(cases: u32) -> Check {
    let strat = (microstate(1..=32, 10.0), prop::collection::vec((-0.5..0.5, -0.5..0.5), 32), 0.01..1.0);
    finish(runner(cases).run(&strat, |(s, moves, gap)| {
        let p = positions(&s);
        let next: Vec<(f64, f64)> = p.iter().zip(&moves).map(|(&(x, y), &(dx, dy))| (x + dx, y + dy)).collect();
        let s2 = Microstate::new(
            next.iter().map(|&(x, y)| AgentState::new(x, y, 0.0)).collect(),
            gap,
        )
        .unwrap();
        let c = circliness(&s);
        let oc = oracle_circliness(&p);
        prop_assert!(close(c, oc, 1e-12), "circliness {c} vs {oc}");
        let v = nn_variance(&s);
        let ov = oracle_nn_variance(&p);
        prop_assert!(close(v, ov, 1e-12), "nn_variance {v} vs {ov}");
        let sp = avg_speed(&s, &s2).unwrap();
        let osp = oracle_avg_speed(&p, &next, gap);
        prop_assert!(close(sp, osp, 1e-12), "avg_speed {sp} vs {osp}");
        Ok(())
    }))
}

// ---- sensor ----

/// Distance and absolute bearing of `target` seen from `a`.
fn polar(a: &AgentState, target: (f64, f64)) -> (f64, f64) {
    let dx = target.0 - a.x;
    let dy = target.1 - a.y;
    (dx.hypot(dy), angle_diff(dy.atan2(dx), a.theta).abs())
}

fn near_boundary(a: &AgentState, target: (f64, f64), sensor: &SensorSpec, margin: f64) -> bool {
    let (d, b) = polar(a, target);
    (d - sensor.range).abs() < margin || (sensor.opening < TAU && (b - 0.5 * sensor.opening).abs() < margin)
}

pub fn sensor() -> impl Strategy<Value = SensorSpec> {
    (0.1..5.0, 1.0..360.0f64).prop_map(|(r, deg)| SensorSpec::new(r, deg.to_radians()).unwrap())
}

pub fn fov_rigid_invariance(cases: u32) -> Check {
    let strat = (agent(5.0), (-5.0..5.0, -5.0..5.0), sensor(), rigid());
    finish(runner(cases).run(&strat, |(a, t, sensor, g)| {
        prop_assume!(!near_boundary(&a, t, &sensor, 1e-7));
        prop_assert_eq!(in_fov(&a, t, &sensor), in_fov(&g.agent(&a), g.point(t), &sensor));
        Ok(())
    }))
}

pub fn full_circle_is_range_test(cases: u32) -> Check {
    let strat = (agent(5.0), (-5.0..5.0f64, -5.0..5.0f64), 0.1..5.0);
    finish(runner(cases).run(&strat, |(a, t, range)| {
        let sensor = SensorSpec::new(range, TAU).unwrap();
        let d = (t.0 - a.x).hypot(t.1 - a.y);
        prop_assert_eq!(in_fov(&a, t, &sensor), d > 0.0 && d <= range);
        Ok(())
    }))
}

/// Dot-product formulation: inside when `0 < d ≤ γ` and `ĥ·(q − p) ≥ d·cos(φ/2)`.
fn brute_sense(i: usize, s: &Microstate, sensor: &SensorSpec) -> bool {
    let a = &s.agents()[i];
    s.agents().iter().enumerate().any(|(j, b)| {
        if i == j {
            return false;
        }
        let dx = b.x - a.x;
        let dy = b.y - a.y;
        let d = (dx * dx + dy * dy).sqrt();
        d > 0.0
            && d <= sensor.range
            && (sensor.opening >= TAU || a.theta.cos() * dx + a.theta.sin() * dy >= d * (0.5 * sensor.opening).cos())
    })
}

pub fn sense_matches_brute_force(cases: u32) -> Check {
    let strat = (microstate(1..=12, 3.0), sensor());
    finish(runner(cases).run(&strat, |(s, sensor)| {
        for i in 0..s.len() {
            let a = &s.agents()[i];
            let ambiguous = s
                .agents()
                .iter()
                .enumerate()
                .any(|(j, b)| j != i && near_boundary(a, (b.x, b.y), &sensor, 1e-7));
            if ambiguous {
                continue;
            }
            prop_assert_eq!(sense(i, &s, &sensor).unwrap(), brute_sense(i, &s, &sensor), "agent {}", i);
        }
        Ok(())
    }))
}

pub fn sense_rigid_and_permutation_invariance(cases: u32) -> Check {
    let strat = (microstate(2..=10, 3.0), sensor(), rigid()).prop_flat_map(|(s, sensor, g)| {
        let n = s.len();
        (Just(s), Just(sensor), Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    });
    finish(runner(cases).run(&strat, |(s, sensor, g, perm)| {
        let moved = g.state(&s);
        let permuted = Microstate::new(perm.iter().map(|&k| s.agents()[k]).collect(), 0.0).unwrap();
        for i in 0..s.len() {
            let a = &s.agents()[i];
            let ambiguous = s
                .agents()
                .iter()
                .any(|b| !std::ptr::eq(a, b) && near_boundary(a, (b.x, b.y), &sensor, 1e-7));
            if ambiguous {
                continue;
            }
            let h = sense(i, &s, &sensor).unwrap();
            prop_assert_eq!(h, sense(i, &moved, &sensor).unwrap());
            let k = perm.iter().position(|&p| p == i).unwrap();
            prop_assert_eq!(h, sense(k, &permuted, &sensor).unwrap());
        }
        Ok(())
    }))
}

fn floyd_warshall_connected(p: &[(f64, f64)], radius: f64) -> bool {
    let n = p.len();
    let mut reach = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            reach[i][j] = i == j || (p[i].0 - p[j].0).hypot(p[i].1 - p[j].1) <= radius;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                reach[i][j] = reach[i][j] || (reach[i][k] && reach[k][j]);
            }
        }
    }
    reach.iter().all(|row| row.iter().all(|&r| r))
}

pub fn connectivity_matches_floyd_warshall(cases: u32) -> Check {
    let strat = (microstate(1..=15, 3.0), 0.05..4.0);
    finish(runner(cases).run(&strat, |(s, radius)| {
        prop_assert_eq!(r_disk_connected(&s, radius), floyd_warshall_connected(&positions(&s), radius));
        Ok(())
    }))
}

// ---- markers ----

pub fn marker_invariances(cases: u32) -> Check {
    let strat = (microstate(2..=20, 5.0), rigid(), 0.1..10.0).prop_flat_map(|(s, g, k)| {
        let n = s.len();
        (Just(s), Just(g), Just(k), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    });
    finish(runner(cases).run(&strat, |(s, g, k, perm)| {
        let c = circliness(&s);
        let v = nn_variance(&s);
        prop_assume!(c.is_finite());

        let moved = g.state(&s);
        prop_assert!(close(circliness(&moved), c, 1e-8), "rigid circliness");
        prop_assert!((nn_variance(&moved) - v).abs() <= 1e-9 * v.max(1.0), "rigid nn_variance");

        let permuted = Microstate::new(perm.iter().map(|&i| s.agents()[i]).collect(), 0.0).unwrap();
        prop_assert!(close(circliness(&permuted), c, 1e-12), "permuted circliness");
        prop_assert!(close(nn_variance(&permuted), v, 1e-12), "permuted nn_variance");

        let scaled = Microstate::new(
            s.agents().iter().map(|a| AgentState::new(k * a.x, k * a.y, a.theta)).collect(),
            0.0,
        )
        .unwrap();
        prop_assert!(close(circliness(&scaled), c, 1e-9), "scaled circliness");
        prop_assert!(close(nn_variance(&scaled), k * k * v, 1e-9), "scaled nn_variance");

        let later = Microstate::new(s.agents().to_vec(), 0.1).unwrap();
        let later_moved = Microstate::new(moved.agents().to_vec(), 0.1).unwrap();
        let shifted = Microstate::new(
            s.agents().iter().map(|a| AgentState::new(a.x + 0.01, a.y, a.theta)).collect(),
            0.1,
        )
        .unwrap();
        prop_assert!(avg_speed(&s, &later).unwrap() == 0.0);
        prop_assert!(avg_speed(&moved, &later_moved).unwrap() == 0.0);
        prop_assert!(close(avg_speed(&s, &shifted).unwrap(), 0.1, 1e-9));
        Ok(())
    }))
}

// ---- dynamics ----

pub fn sim_params(controller: Controller) -> impl Strategy<Value = SimParams> {
    (0.05..1.0, 5.0..200.0f64, sensor()).prop_map(move |(v, w, sensor)| {
        let mut p = SimParams::new(controller, 1, v, w.to_radians(), sensor);
        p.body_radius = 0.0;
        p
    })
}

pub fn controller() -> impl Strategy<Value = Controller> {
    prop_oneof![Just(Controller::Milling), Just(Controller::Diffusion)]
}

pub fn step_permutation_invariance(cases: u32) -> Check {
    let strat = (microstate(2..=10, 2.0), controller())
        .prop_flat_map(|(s, c)| {
            let n = s.len();
            (Just(s), sim_params(c), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        });
    finish(runner(cases).run(&strat, |(s, mut p, perm)| {
        p.n_agents = s.len();
        let permuted = Microstate::new(perm.iter().map(|&i| s.agents()[i]).collect(), 0.0).unwrap();
        let a = step(&s, &p);
        let b = step(&permuted, &p);
        for (k, &i) in perm.iter().enumerate() {
            prop_assert_eq!(b.agents()[k], a.agents()[i]);
        }
        Ok(())
    }))
}

fn rk4(agent: AgentState, u: ControlInput, dt: f64, substeps: usize) -> (f64, f64, f64) {
    let f = |s: [f64; 3]| [u.forward_speed * s[2].cos(), u.forward_speed * s[2].sin(), u.turn_rate];
    let h = dt / substeps as f64;
    let mut s = [agent.x, agent.y, agent.theta];
    for _ in 0..substeps {
        let k1 = f(s);
        let k2 = f([s[0] + 0.5 * h * k1[0], s[1] + 0.5 * h * k1[1], s[2] + 0.5 * h * k1[2]]);
        let k3 = f([s[0] + 0.5 * h * k2[0], s[1] + 0.5 * h * k2[1], s[2] + 0.5 * h * k2[2]]);
        let k4 = f([s[0] + h * k3[0], s[1] + h * k3[1], s[2] + h * k3[2]]);
        for d in 0..3 {
            s[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
        }
    }
    (s[0], s[1], s[2])
}

fn control_input() -> impl Strategy<Value = ControlInput> {
    (-1.0..1.0, prop_oneof![Just(0.0), -6.0..6.0]).prop_map(|(v, w)| ControlInput {
        forward_speed: v,
        turn_rate: w,
    })
}

pub fn integrator_matches_rk4(cases: u32) -> Check {
    let strat = (agent(10.0), control_input(), 0.001..0.5);
    finish(runner(cases).run(&strat, |(a, u, dt)| {
        let b = integrate(&a, u, dt);
        let (x, y, t) = rk4(a, u, dt, 200);
        prop_assert!((b.x - x).abs() <= 1e-6 && (b.y - y).abs() <= 1e-6, "position off: {b:?} vs ({x}, {y})");
        prop_assert!(angle_diff(b.theta, t).abs() <= 1e-6);
        Ok(())
    }))
}

pub fn chord_length_invariant(cases: u32) -> Check {
    let strat = (agent(10.0), control_input(), 0.001..2.0);
    finish(runner(cases).run(&strat, |(a, u, dt)| {
        let b = integrate(&a, u, dt);
        let chord = (b.x - a.x).hypot(b.y - a.y);
        let expected = if u.turn_rate == 0.0 {
            u.forward_speed.abs() * dt
        } else {
            (2.0 * u.forward_speed * (0.5 * u.turn_rate * dt).sin() / u.turn_rate).abs()
        };
        prop_assert!((chord - expected).abs() <= 1e-12 * expected.max(1.0));
        prop_assert!(angle_diff(b.theta, a.theta + u.turn_rate * dt).abs() <= 1e-12);
        Ok(())
    }))
}

/// Overlaps as they arise during a run: a valid packing (random sequential
/// adsorption, packing fraction up to 0.5) after every body moved by up to
/// 10% of its radius, more than one default step carries it.
pub fn collisions_leave_no_overlap(cases: u32) -> Check {
    let strat = (2..=20usize, 0.02..0.12f64, 2.5..6.0f64)
        .prop_flat_map(|(n, r, k)| {
            let side = k * r * (n as f64).sqrt();
            (
                Just(n),
                Just(r),
                prop::collection::vec((0.0..side, 0.0..side), 400),
                prop::collection::vec((-PI..PI, 0.0..0.1 * r, -PI..PI), n),
            )
        });
    finish(runner(cases).run(&strat, |(n, r, candidates, jitter)| {
        let mut packed: Vec<(f64, f64)> = Vec::with_capacity(n);
        for p in candidates {
            if packed.len() == n {
                break;
            }
            if packed.iter().all(|q| (p.0 - q.0).hypot(p.1 - q.1) >= 2.0 * r) {
                packed.push(p);
            }
        }
        let s = Microstate::new(
            packed
                .iter()
                .zip(&jitter)
                .map(|(&(x, y), &(a, m, t))| AgentState::new(x + m * a.cos(), y + m * a.sin(), t))
                .collect(),
            0.0,
        )
        .unwrap();
        let out = resolve_collisions(&s, r);
        let a = out.agents();
        for i in 0..a.len() {
            prop_assert_eq!(a[i].theta, s.agents()[i].theta);
            for j in (i + 1)..a.len() {
                let d = a[i].distance_to(&a[j]);
                prop_assert!(d >= 2.0 * r - 1e-9, "pair ({i}, {j}) at {d} < {}", 2.0 * r);
            }
        }
        Ok(())
    }))
}

pub fn trajectory_rigid_equivariance(cases: u32) -> Check {
    let strat = (microstate(2..=8, 1.5), controller(), rigid()).prop_flat_map(|(s, c, g)| {
        (Just(s), sim_params(c), Just(g))
    });
    finish(runner(cases).run(&strat, |(s, mut p, g)| {
        p.n_agents = s.len();
        p.body_radius = 0.05;
        let mut a = s.clone();
        let mut b = g.state(&s);
        for _ in 0..1000 {
            a = step(&a, &p);
            b = step(&b, &p);
        }
        let expect = g.state(&a);
        for (x, y) in expect.agents().iter().zip(b.agents()) {
            prop_assert!((x.x - y.x).abs() <= 1e-6 && (x.y - y.y).abs() <= 1e-6, "{x:?} vs {y:?}");
            prop_assert!(angle_diff(x.theta, y.theta).abs() <= 1e-6);
        }
        Ok(())
    }))
}

pub fn isolated_diffusers_stay_put(cases: u32) -> Check {
    let strat = (1..=9usize, prop::collection::vec(-PI..PI, 9), sim_params(Controller::Diffusion));
    finish(runner(cases).run(&strat, |(n, headings, mut p)| {
        p.n_agents = n;
        p.body_radius = 0.08;
        let spacing = p.sensor.range * 2.0 + 1.0;
        let start = Microstate::new(
            (0..n)
                .map(|k| AgentState::new((k % 3) as f64 * spacing, (k / 3) as f64 * spacing, headings[k]))
                .collect(),
            0.0,
        )
        .unwrap();
        let mut s = start.clone();
        for _ in 0..200 {
            s = step(&s, &p);
        }
        for (a, b) in start.agents().iter().zip(s.agents()) {
            prop_assert_eq!((a.x, a.y), (b.x, b.y));
        }
        Ok(())
    }))
}

// ---- init ----

pub fn init_postconditions(cases: u32) -> Check {
    let strat = (1..=10usize, 0.3..3.0, 0.0..0.1, any::<u64>());
    finish(runner(cases).run(&strat, |(n, gamma, r, seed)| {
        let mut p = SimParams::new(Controller::Milling, n, 0.25, 1.0, SensorSpec::new(gamma, 1.0).unwrap());
        p.body_radius = r;
        let cfg = InitConfig::default();
        match init_connected_with(&p, seed, &cfg) {
            Ok(s) => {
                prop_assert_eq!(s.len(), n);
                prop_assert!(r_disk_connected(&s, gamma));
                let radius = cfg.disk_radius(&p);
                for (i, a) in s.agents().iter().enumerate() {
                    prop_assert!(a.x.hypot(a.y) <= radius + 1e-12);
                    prop_assert!((-PI..PI).contains(&a.theta));
                    for b in &s.agents()[i + 1..] {
                        prop_assert!(a.distance_to(b) >= 2.0 * r);
                    }
                }
                prop_assert_eq!(s, init_connected_with(&p, seed, &cfg).unwrap());
            }
            Err(swarmphase::Error::InfeasibleInit { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
        Ok(())
    }))
}

// ---- classification ----

fn marker_vector() -> impl Strategy<Value = MarkerVector> {
    let v = prop_oneof![4 => 0.0..2.0, 1 => Just(f64::INFINITY)];
    (0.0..1.0, v.clone(), v).prop_map(|(s, c, d)| MarkerVector {
        window: (0.0, 10.0),
        avg_speed: s,
        circliness: c,
        nn_variance: d,
    })
}

pub fn classification_monotone(cases: u32) -> Check {
    let strat = (
        marker_vector(),
        (0.001..0.5, 0.001..0.5, 0.001..0.2),
        (0.0..0.5, 0.0..0.5, 0.0..0.2),
        0.01..1.0,
    );
    finish(runner(cases).run(&strat, |(m, (c, d, tol), (dc, dd, dtol), v_set)| {
        let strict = |b| StructureSet {
            circliness_max: c,
            nn_variance_max: d,
            speed_rel_tol: tol,
            ..StructureSet::for_behavior(b)
        };
        let loose = |b| StructureSet {
            circliness_max: c + dc,
            nn_variance_max: d + dd,
            speed_rel_tol: tol + dtol,
            ..StructureSet::for_behavior(b)
        };
        let a = classify_milling(&m, &strict(Behavior::Milling), v_set).unwrap();
        let b = classify_milling(&m, &loose(Behavior::Milling), v_set).unwrap();
        prop_assert!(!a.value || b.value);
        prop_assert_eq!(a, classify_milling(&m, &strict(Behavior::Milling), v_set).unwrap());
        let a = classify_diffusion(&m, &strict(Behavior::Diffusion)).unwrap();
        let b = classify_diffusion(&m, &loose(Behavior::Diffusion)).unwrap();
        prop_assert!(!a.value || b.value);
        Ok(())
    }))
}

// ---- phase diagrams ----

pub fn color_rule_properties(max_trials: usize) -> Check {
    let rules = [
        ColorRule::for_behavior(Behavior::Milling),
        ColorRule::for_behavior(Behavior::Diffusion),
        ColorRule::new(Rgb::BLUE, Rgb(10, 20, 30)),
    ];
    for t in 1..=max_trials {
        let mut prev = f64::NEG_INFINITY;
        for s in 0..=t {
            let i = signed_intensity(s, t).map_err(|e| e.to_string())?;
            if i < prev {
                return Err(format!("intensity drops at {s}/{t}"));
            }
            prev = i;
            if i != -signed_intensity(t - s, t).unwrap() {
                return Err(format!("asymmetric intensity at {s}/{t}"));
            }
            for rule in &rules {
                let swapped = ColorRule::new(rule.failure, rule.success);
                let here = color_for(s, t, rule).unwrap();
                if here != color_for(t - s, t, &swapped).unwrap() {
                    return Err(format!("colors not mirrored at {s}/{t}"));
                }
                // distance from white grows with |intensity| along the chosen hue
                let hue = if i > 0.0 { rule.success } else { rule.failure };
                if i == 0.0 && here != Rgb::WHITE {
                    return Err(format!("tie at {s}/{t} is not white"));
                }
                if here != hue.from_white(i.abs()) && i != 0.0 {
                    return Err(format!("color at {s}/{t} is off the hue ramp"));
                }
            }
        }
    }
    Ok(())
}

pub fn svg_parse_and_count(cases: u32) -> Check {
    let strat = (1..=7usize, 1..=7usize, 1..=12usize).prop_flat_map(|(nx, ny, t)| {
        (Just(nx), Just(ny), Just(t), prop::collection::vec(0..=t, nx * ny))
    });
    finish(runner(cases).run(&strat, |(nx, ny, t, succ)| {
        let axis = |name, n: usize| Axis {
            name,
            values: (0..n).map(|k| 0.5 + k as f64).collect(),
        };
        let cells = (0..ny)
            .map(|j| {
                (0..nx)
                    .map(|i| PhaseCell {
                        point: i * ny + j,
                        coords: Default::default(),
                        trials: t,
                        successes: succ[i * ny + j],
                    })
                    .collect()
            })
            .collect();
        let d = PhaseDiagram::new(
            axis(AxisName::Range, nx),
            axis(AxisName::Speed, ny),
            cells,
            Behavior::Diffusion,
            ColorRule::for_behavior(Behavior::Diffusion),
        )
        .unwrap();
        let svg = d.to_svg().unwrap();
        prop_assert_eq!(&svg, &d.to_svg().unwrap());
        let doc = roxmltree::Document::parse(&svg).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let class_count = |c: &str| {
            doc.descendants()
                .filter(|n| n.attribute("class").is_some_and(|v| v.split(' ').any(|x| x == c)))
                .count()
        };
        prop_assert_eq!(class_count("cell"), nx * ny);
        prop_assert_eq!(class_count("x-tick"), nx);
        prop_assert_eq!(class_count("y-tick"), ny);
        prop_assert_eq!(class_count("legend"), 11);
        Ok(())
    }))
}

// ---- persistence ----

pub fn trial_persistence_round_trip(cases: u32) -> Check {
    let record = (marker_vector(), any::<u64>(), 0..50usize, 0..20usize, 0.0..1e4, any::<bool>(), 0.0001..1.0)
        .prop_map(|(m, seed, point, trial, wall, failed, v_set)| {
            let c = classify_milling(&m, &StructureSet::milling(), v_set).unwrap();
            TrialRecord {
                point,
                coords: [("N".to_string(), point as f64), ("phi".to_string(), v_set * 100.0)].into(),
                trial,
                seed,
                value: !failed && c.value,
                classification: (!failed).then_some(c),
                error: failed.then(|| "infeasible".to_string()),
                wall_time: wall,
            }
        });
    let strat = prop::collection::vec(record, 0..20);
    let grid = ParamGrid::new(
        SimParams::new(Controller::Milling, 6, 0.25, 45f64.to_radians(), SensorSpec::new(1.0, 50f64.to_radians()).unwrap()),
        vec![Axis {
            name: AxisName::N,
            values: vec![4.0, 5.0],
        }],
        10,
        1,
    )
    .unwrap();
    let config = grid.to_config();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("trials.jsonl");
    finish(runner(cases).run(&strat, |records| {
        let mut buf = Vec::new();
        write_trials(&mut buf, &config, &records).unwrap();
        std::fs::write(&path, &buf).unwrap();
        let (cfg, back) = load_trials(&path).unwrap();
        prop_assert_eq!(&cfg, &config);
        prop_assert_eq!(back, records);
        Ok(())
    }))
}
