mod common;

use std::io::Cursor;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use satmist::infra::Vm;
use satmist::metrics::{self, MetricsRecord};
use satmist::netenergy::{self, RadioParams};
use satmist::orbital::{self, OrbitalElements, Vec3};
use satmist::orchestrate::{self, Candidate, PlacementContext, TaskDemand};
use satmist::{Layer, LayerMask, PerLayer, PolicyId};

use common::{brute_argmin, ok_feasible, tradeoff_oracle, random_vm_oracle, tx_oracle, wg_oracle, LAYERS};

fn layer_strategy() -> impl Strategy<Value = Layer> {
    (0usize..3).prop_map(|i| LAYERS[i])
}

fn candidate_strategy() -> impl Strategy<Value = Candidate> {
    (
        layer_strategy(),
        prop_oneof![Just(0.0), 1.0..45e6f64],
        0usize..8,
        prop_oneof![Just(10_000.0), Just(40_000.0), Just(100_000.0)],
        0u64..6,
    )
        .prop_map(|(layer, d, q, mips, a)| Candidate {
            vm_id: 0,
            host_layer: layer,
            distance_m: d,
            queue_len: q,
            vm_mips: mips,
            assigned_count: a,
        })
}

fn candidates(max: usize) -> impl Strategy<Value = Vec<Candidate>> {
    prop::collection::vec(candidate_strategy(), 1..=max).prop_map(|mut v| {
        for (i, c) in v.iter_mut().enumerate() {
            c.vm_id = 100 + i;
        }
        v
    })
}

fn mask_strategy() -> impl Strategy<Value = LayerMask> {
    (1u8..8).prop_map(|bits| {
        LAYERS
            .iter()
            .enumerate()
            .filter(|(i, _)| bits & (1 << i) != 0)
            .fold(LayerMask::NONE, |m, (_, &l)| m.with(l))
    })
}

fn ctx(mask: LayerMask) -> PlacementContext {
    PlacementContext {
        architecture: mask,
        ..PlacementContext::default()
    }
}

const TASK: TaskDemand = TaskDemand {
    length_mi: 10_000.0,
    input_bits: 2e9,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn distance_is_a_metric(
        a in prop::array::uniform3(-1e7..1e7f64),
        b in prop::array::uniform3(-1e7..1e7f64),
        c in prop::array::uniform3(-1e7..1e7f64),
    ) {
        let (a, b, c) = (Vec3::new(a[0], a[1], a[2]), Vec3::new(b[0], b[1], b[2]), Vec3::new(c[0], c[1], c[2]));
        let ab = orbital::distance(a, b);
        prop_assert!(ab >= 0.0);
        prop_assert_eq!(ab, orbital::distance(b, a));
        prop_assert_eq!(orbital::distance(a, a), 0.0);
        prop_assert!(ab <= orbital::distance(a, c) + orbital::distance(c, b) + 1e-6);
    }

    #[test]
    fn orbits_keep_their_radius(
        alt in 400e3..40e6f64,
        incl in 0.0..std::f64::consts::PI,
        raan in 0.0..std::f64::consts::TAU,
        phase in 0.0..std::f64::consts::TAU,
        t in 0.0..1e5f64,
    ) {
        let e = OrbitalElements::new(alt, incl, raan, phase).unwrap();
        let p = orbital::position_at(&e, t);
        let a = orbital::EARTH_RADIUS_M + alt;
        prop_assert!((p.norm() - a).abs() <= 1e-6 * a);
        let q = orbital::position_at(&e, t + e.period_s());
        prop_assert!(orbital::distance(p, q) <= 1e-6 * a);
    }

    #[test]
    fn tx_energy_is_monotone_in_distance(bits in 1.0..1e10f64, d1 in 0.0..5e7f64, d2 in 0.0..5e7f64) {
        let r = RadioParams::default();
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        prop_assert!(netenergy::tx_energy(bits, lo, &r) <= netenergy::tx_energy(bits, hi, &r));
    }

    #[test]
    fn tx_energy_is_linear_in_bits(bits in 1.0..1e10f64, k in 1.0..100.0f64, d in 0.0..5e7f64) {
        let r = RadioParams::default();
        let one = netenergy::tx_energy(bits, d, &r);
        let scaled = netenergy::tx_energy(k * bits, d, &r);
        prop_assert!((scaled - k * one).abs() <= 1e-9 * scaled);
        prop_assert!((netenergy::tx_energy(bits, d, &r) - tx_oracle(bits, d)).abs() <= 1e-9 * one);
    }

    #[test]
    fn energy_db_shifts_by_ten_per_decade(j in 1e-6..1e30f64) {
        let a = netenergy::energy_db(j).unwrap();
        let b = netenergy::energy_db(10.0 * j).unwrap();
        prop_assert!((b - a - 10.0).abs() < 1e-9);
    }

    #[test]
    fn standardized_argmin_is_raw_argmin(values in prop::collection::vec(0.0..1e8f64, 1..20)) {
        let z = orchestrate::standardize(&values).unwrap();
        let argmin = |v: &[f64]| v.iter().enumerate().fold(0, |b, (i, x)| if *x < v[b] { i } else { b });
        prop_assert_eq!(argmin(&z), argmin(&values));
    }

    #[test]
    fn distance_only_is_scale_invariant(cands in candidates(10), k in 0.1..0.99f64) {
        let c = ctx(LayerMask::ALL);
        let scaled: Vec<Candidate> = cands.iter().map(|x| Candidate { distance_m: x.distance_m * k, ..*x }).collect();
        let a = orchestrate::distance_only(&cands, &TASK, &c).ok().map(|s| s.index);
        let b = orchestrate::distance_only(&scaled, &TASK, &c).ok().map(|s| s.index);
        if let Some(a) = a {
            let raw = brute_argmin(&scaled, LayerMask::ALL, |x| x.distance_m);
            prop_assert_eq!(b, raw);
            prop_assert!(b.is_some());
            prop_assert!(scaled[b.unwrap()].distance_m <= scaled[a].distance_m);
        }
    }

    #[test]
    fn policies_match_brute_force(cands in candidates(10), mask in mask_strategy(), seed in any::<u64>()) {
        let c = ctx(mask);
        let got = |p: PolicyId| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            orchestrate::select(p, &cands, &TASK, &c, &mut rng).ok().map(|s| s.index)
        };
        prop_assert_eq!(got(PolicyId::DistanceOnly), brute_argmin(&cands, mask, |x| x.distance_m));
        prop_assert_eq!(got(PolicyId::RoundRobin), brute_argmin(&cands, mask, |x| x.assigned_count as f64));
        prop_assert_eq!(got(PolicyId::TradeOff), brute_argmin(&cands, mask, |x| tradeoff_oracle(x, TASK.length_mi)));
        prop_assert_eq!(got(PolicyId::WeightGreedy), wg_oracle(&cands, mask, &TASK));
        let rv = got(PolicyId::RandomVm);
        prop_assert_eq!(rv, random_vm_oracle(&cands, mask, &mut ChaCha8Rng::seed_from_u64(seed)));
        if let Some(i) = rv {
            prop_assert!(ok_feasible(&cands[i], mask));
        }
    }

    #[test]
    fn fifo_completions_never_decrease(
        jobs in prop::collection::vec((0.0..10.0f64, 0.01..5.0f64), 1..30),
    ) {
        let mut vm = Vm::new(0, 0, Layer::Mist, 10_000.0);
        let mut now = 0.0;
        let mut last = 0.0;
        for (gap, exec) in jobs {
            now += gap;
            let done = vm.enqueue(0, now, exec);
            prop_assert!(done >= last);
            prop_assert!(done >= now + exec);
            last = done;
        }
    }

    #[test]
    fn csv_round_trips(
        generated in 0u64..1_000_000,
        split in prop::array::uniform5(0.0..1.0f64),
        delay in prop::option::of(0.0..100.0f64),
        energy in prop_oneof![Just(0.0), 1e-3..1e30f64],
        cpu in 0.0..100.0f64,
        policy in 0usize..5,
        sats in 1usize..2000,
        seed in any::<u64>(),
    ) {
        let total: f64 = split.iter().sum::<f64>().max(1e-9);
        let mut parts = split.map(|s| (s / total * generated as f64).floor() as u64);
        parts[4] = generated - parts[..4].iter().sum::<u64>();
        let mut r = MetricsRecord {
            policy: PolicyId::ALL[policy],
            satellite_count: sats,
            seed,
            generated,
            succeeded: parts[0],
            failed_deadline: parts[1],
            failed_mobility: parts[2],
            failed_no_destination: parts[3],
            unfinished: parts[4],
            success_rate_pct: None,
            avg_e2e_delay_s: delay,
            total_energy_j: energy,
            total_energy_db: netenergy::energy_db(energy).unwrap_or(f64::NEG_INFINITY),
            avg_vm_cpu_pct: cpu,
            per_layer_task_counts: PerLayer::default(),
        };
        r.success_rate_pct = metrics::success_rate(&r);
        let text = metrics::to_csv_string(std::slice::from_ref(&r));
        let back = metrics::parse_csv(Cursor::new(text.as_bytes())).unwrap();
        prop_assert_eq!(back.len(), 1);
        prop_assert_eq!(metrics::to_csv_string(&back), text);
        prop_assert!(back[0].is_conserved());
        prop_assert_eq!(back[0].avg_e2e_delay_s.is_none(), delay.is_none());
    }
}
