//! Placement policies: given a task and a snapshot of candidate VMs, pick one.
//!
//! All policies only ever return a feasible candidate (layer enabled by the
//! architecture and within that layer's communication range) and break ties
//! toward the lowest candidate index.
//!
//! Tunable constants for `trade_off` and `weight_greedy` live in
//! [`PlacementContext`] and [`WEIGHT_GREEDY_RATIOS`].

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::infra::VmId;
use crate::layer::{Layer, LayerMask, PerLayer};
use crate::netenergy::{self, LinkParams, RadioParams};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Candidate<T = f64> {
    pub vm_id: VmId,
    pub host_layer: Layer,
    /// Source satellite to host satellite at decision time.
    pub distance_m: T,
    /// Tasks placed on the VM that have not finished executing.
    pub queue_len: usize,
    pub vm_mips: T,
    pub assigned_count: u64,
}

/// The parts of a task a placement decision looks at.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaskDemand<T = f64> {
    pub length_mi: T,
    pub input_bits: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Selection<T = f64> {
    /// Position of the chosen candidate in the input slice.
    pub index: usize,
    pub vm_id: VmId,
    /// Policy-specific score of the winner; informational only.
    pub score: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolicyId {
    DistanceOnly,
    RoundRobin,
    TradeOff,
    RandomVm,
    WeightGreedy,
}

impl PolicyId {
    pub const ALL: [PolicyId; 5] = [
        PolicyId::RoundRobin,
        PolicyId::TradeOff,
        PolicyId::RandomVm,
        PolicyId::WeightGreedy,
        PolicyId::DistanceOnly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyId::DistanceOnly => "distance_only",
            PolicyId::RoundRobin => "round_robin",
            PolicyId::TradeOff => "trade_off",
            PolicyId::RandomVm => "random_vm",
            PolicyId::WeightGreedy => "weight_greedy",
        }
    }
}

impl fmt::Display for PolicyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyId {
    type Err = Error;

    /// Accepts the snake-case names as well as `Round_Robin`-style spellings
    /// and `WG`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "distance_only" => Ok(PolicyId::DistanceOnly),
            "round_robin" => Ok(PolicyId::RoundRobin),
            "trade_off" => Ok(PolicyId::TradeOff),
            "random_vm" => Ok(PolicyId::RandomVm),
            "weight_greedy" | "wg" => Ok(PolicyId::WeightGreedy),
            other => Err(Error::Config(format!("unknown policy `{other}`"))),
        }
    }
}

/// Weights of the four weight-greedy indicators: distance, CPU time,
/// parallel tasks, energy.
pub const WEIGHT_GREEDY_RATIOS: [f64; 4] = [6.0, 6.0, 5.0, 3.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacementContext<T = f64> {
    pub architecture: LayerMask,
    pub link: LinkParams<T>,
    pub radio: RadioParams<T>,
    /// Per-layer multiplier on trade-off's processing-time term.
    pub tradeoff_layer_weight: PerLayer<T>,
}

impl Default for PlacementContext<f64> {
    fn default() -> Self {
        PlacementContext {
            architecture: LayerMask::ALL,
            link: LinkParams::default(),
            radio: RadioParams::default(),
            tradeoff_layer_weight: PerLayer::new(1.0, 1.0, 1.2),
        }
    }
}

pub fn feasible<T: Scalar>(c: &Candidate<T>, ctx: &PlacementContext<T>) -> bool {
    ctx.architecture.contains(c.host_layer)
        && netenergy::in_range(c.distance_m, c.host_layer, &ctx.link)
}

/// Z-scores with the population standard deviation; all zeros when σ = 0.
pub fn standardize<T: Scalar>(values: &[T]) -> Result<Vec<T>> {
    if values.is_empty() {
        return Err(Error::Domain("cannot standardize an empty list".into()));
    }
    let n = T::from(values.len()).expect("length fits in a float");
    let mean = values.iter().fold(T::zero(), |a, &v| a + v) / n;
    let var = values
        .iter()
        .fold(T::zero(), |a, &v| a + (v - mean) * (v - mean))
        / n;
    let sigma = var.sqrt();
    if sigma == T::zero() || !sigma.is_finite() {
        return Ok(vec![T::zero(); values.len()]);
    }
    Ok(values.iter().map(|&v| (v - mean) / sigma).collect())
}

/// Min-max scaling to [0, 1]; a constant series maps to all zeros.
pub fn min_max_normalize<T: Scalar>(values: &[T]) -> Vec<T> {
    let (lo, hi) = values
        .iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    let span = hi - lo;
    if !(span > T::zero()) {
        return vec![T::zero(); values.len()];
    }
    values.iter().map(|&v| (v - lo) / span).collect()
}

/// Lowest score over the feasible candidates, first index on ties.
fn argmin_feasible<T: Scalar>(
    cands: &[Candidate<T>],
    ctx: &PlacementContext<T>,
    score: impl Fn(usize, &Candidate<T>) -> T,
) -> Result<Selection<T>> {
    let mut best: Option<Selection<T>> = None;
    for (i, c) in cands.iter().enumerate() {
        if !feasible(c, ctx) {
            continue;
        }
        let s = score(i, c);
        if best.is_none_or(|b| s < b.score) {
            best = Some(Selection {
                index: i,
                vm_id: c.vm_id,
                score: s,
            });
        }
    }
    best.ok_or(Error::NoFeasibleCandidate)
}

/// Nearest feasible VM by standardized propagation delay.
///
/// Standardization is a positive affine map, so the winner is the feasible
/// candidate with the smallest raw distance.
pub fn distance_only<T: Scalar>(
    cands: &[Candidate<T>],
    _task: &TaskDemand<T>,
    ctx: &PlacementContext<T>,
) -> Result<Selection<T>> {
    if cands.is_empty() {
        return Err(Error::NoFeasibleCandidate);
    }
    let delays: Vec<T> = cands
        .iter()
        .map(|c| netenergy::propagation_delay(c.distance_m, &ctx.link))
        .collect();
    let standardized = standardize(&delays)?;
    argmin_feasible(cands, ctx, |i, _| standardized[i])
}

/// Feasible VM with the fewest tasks assigned so far.
pub fn round_robin<T: Scalar>(
    cands: &[Candidate<T>],
    _task: &TaskDemand<T>,
    ctx: &PlacementContext<T>,
) -> Result<Selection<T>> {
    argmin_feasible(cands, ctx, |_, c| {
        T::from(c.assigned_count).expect("count fits in a float")
    })
}

/// Random start index, then a cyclic scan for the first feasible VM.
pub fn random_vm<T: Scalar, R: Rng + ?Sized>(
    cands: &[Candidate<T>],
    _task: &TaskDemand<T>,
    ctx: &PlacementContext<T>,
    rng: &mut R,
) -> Result<Selection<T>> {
    if cands.is_empty() {
        return Err(Error::NoFeasibleCandidate);
    }
    let start = rng.random_range(0..cands.len());
    (0..cands.len())
        .map(|k| (start + k) % cands.len())
        .find(|&i| feasible(&cands[i], ctx))
        .map(|i| Selection {
            index: i,
            vm_id: cands[i].vm_id,
            score: T::zero(),
        })
        .ok_or(Error::NoFeasibleCandidate)
}

/// Trade-off score: `layer_weight·(queue+1)·length/mips + distance/speed`.
pub fn trade_off_score<T: Scalar>(
    c: &Candidate<T>,
    task: &TaskDemand<T>,
    ctx: &PlacementContext<T>,
) -> T {
    let waiting = T::from(c.queue_len + 1).expect("queue length fits in a float");
    ctx.tradeoff_layer_weight[c.host_layer] * waiting * task.length_mi / c.vm_mips
        + netenergy::propagation_delay(c.distance_m, &ctx.link)
}

pub fn trade_off<T: Scalar>(
    cands: &[Candidate<T>],
    task: &TaskDemand<T>,
    ctx: &PlacementContext<T>,
) -> Result<Selection<T>> {
    argmin_feasible(cands, ctx, |_, c| trade_off_score(c, task, ctx))
}

/// Weighted sum of four min-max-normalized indicators over the feasible set:
/// transmission distance, CPU processing time, parallel tasks and transmit
/// energy, weighted 6:6:5:3.
pub fn weight_greedy<T: Scalar>(
    cands: &[Candidate<T>],
    task: &TaskDemand<T>,
    ctx: &PlacementContext<T>,
) -> Result<Selection<T>> {
    let feasible_idx: Vec<usize> = (0..cands.len())
        .filter(|&i| feasible(&cands[i], ctx))
        .collect();
    if feasible_idx.is_empty() {
        return Err(Error::NoFeasibleCandidate);
    }
    let mut indicators: [Vec<T>; 4] = Default::default();
    for &i in &feasible_idx {
        let c = &cands[i];
        let queue = T::from(c.queue_len).expect("queue length fits in a float");
        indicators[0].push(c.distance_m);
        indicators[1].push((queue + T::one()) * task.length_mi / c.vm_mips);
        indicators[2].push(queue);
        indicators[3].push(netenergy::tx_energy(task.input_bits, c.distance_m, &ctx.radio));
    }
    let normalized = indicators.map(|v| min_max_normalize(&v));
    let weights = WEIGHT_GREEDY_RATIOS.map(T::lit);

    let mut best: Option<Selection<T>> = None;
    for (k, &i) in feasible_idx.iter().enumerate() {
        let score = (0..4).fold(T::zero(), |acc, m| acc + weights[m] * normalized[m][k]);
        if best.is_none_or(|b| score < b.score) {
            best = Some(Selection {
                index: i,
                vm_id: cands[i].vm_id,
                score,
            });
        }
    }
    best.ok_or(Error::NoFeasibleCandidate)
}

/// Dispatches to the configured policy. `rng` is only consumed by
/// [`PolicyId::RandomVm`].
pub fn select<T: Scalar, R: Rng + ?Sized>(
    policy: PolicyId,
    cands: &[Candidate<T>],
    task: &TaskDemand<T>,
    ctx: &PlacementContext<T>,
    rng: &mut R,
) -> Result<Selection<T>> {
    match policy {
        PolicyId::DistanceOnly => distance_only(cands, task, ctx),
        PolicyId::RoundRobin => round_robin(cands, task, ctx),
        PolicyId::TradeOff => trade_off(cands, task, ctx),
        PolicyId::RandomVm => random_vm(cands, task, ctx, rng),
        PolicyId::WeightGreedy => weight_greedy(cands, task, ctx),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cand(vm_id: usize, layer: Layer, d: f64) -> Candidate {
        Candidate {
            vm_id,
            host_layer: layer,
            distance_m: d,
            queue_len: 0,
            vm_mips: 10_000.0,
            assigned_count: 0,
        }
    }

    fn mist(ds: &[f64]) -> Vec<Candidate> {
        ds.iter().enumerate().map(|(i, &d)| cand(i, Layer::Mist, d)).collect()
    }

    const TASK: TaskDemand = TaskDemand {
        length_mi: 20_000.0,
        input_bits: 8e6,
    };

    #[test]
    fn feasibility() {
        let ctx = PlacementContext::default();
        assert!(feasible(&cand(0, Layer::Mist, 3.2e7), &ctx));
        assert!(!feasible(&cand(0, Layer::Cloud, 4.1e7), &ctx));
        let mist_only = PlacementContext {
            architecture: LayerMask::only(Layer::Mist),
            ..ctx
        };
        assert!(!feasible(&cand(0, Layer::EdgeDc, 0.0), &mist_only));
    }

    #[test]
    fn standardize_examples() {
        let z: Vec<f64> = standardize(&[1.0, 2.0, 3.0]).unwrap();
        for (got, want) in z.iter().zip([-1.2247, 0.0, 1.2247]) {
            assert!((got - want).abs() < 1e-4);
        }
        assert_eq!(standardize(&[5.0, 5.0, 5.0]).unwrap(), vec![0.0; 3]);
        assert!(standardize::<f64>(&[]).is_err());
    }

    #[test]
    fn distance_only_examples() {
        let ctx = PlacementContext::default();
        let s = distance_only(&mist(&[5e6, 3e6, 9e6]), &TASK, &ctx).unwrap();
        assert_eq!(s.index, 1);

        let mut c = mist(&[1e6, 2e6, 3e6]);
        c[0].host_layer = Layer::EdgeDc;
        let ctx_mist = PlacementContext {
            architecture: LayerMask::only(Layer::Mist),
            ..ctx
        };
        assert_eq!(distance_only(&c, &TASK, &ctx_mist).unwrap().index, 1);

        let s = distance_only(&mist(&[4e6, 0.0, 1e6]), &TASK, &ctx).unwrap();
        assert_eq!(s.index, 1);

        let far = mist(&[4e7, 5e7]);
        assert_eq!(
            distance_only(&far, &TASK, &ctx),
            Err(Error::NoFeasibleCandidate)
        );
    }

    #[test]
    fn round_robin_examples() {
        let ctx = PlacementContext::default();
        let mut c = mist(&[1.0, 1.0, 1.0]);
        for (x, a) in c.iter_mut().zip([4, 2, 7]) {
            x.assigned_count = a;
        }
        assert_eq!(round_robin(&c, &TASK, &ctx).unwrap().index, 1);
        let c = mist(&[1.0, 1.0, 1.0]);
        assert_eq!(round_robin(&c, &TASK, &ctx).unwrap().index, 0);
    }

    #[test]
    fn round_robin_stays_balanced() {
        let ctx = PlacementContext::default();
        let mut c = mist(&[1.0, 2.0, 3.0]);
        for _ in 0..50 {
            let s = round_robin(&c, &TASK, &ctx).unwrap();
            c[s.index].assigned_count += 1;
            let max = c.iter().map(|x| x.assigned_count).max().unwrap();
            let min = c.iter().map(|x| x.assigned_count).min().unwrap();
            assert!(max - min <= 1);
        }
    }

    #[test]
    fn random_vm_examples() {
        let ctx = PlacementContext::default();
        let mut c = mist(&[5e7, 1e6, 5e7]);
        for seed in 0..20 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            assert_eq!(random_vm(&c, &TASK, &ctx, &mut rng).unwrap().index, 1);
        }
        // only index 2 feasible after a draw of 1: cyclic scan forward
        c[1].distance_m = 5e7;
        c[2].distance_m = 1.0;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(random_vm(&c, &TASK, &ctx, &mut rng).unwrap().index, 2);

        let all = mist(&[1.0; 8]);
        let pick = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..10)
                .map(|_| random_vm(&all, &TASK, &ctx, &mut rng).unwrap().index)
                .collect::<Vec<_>>()
        };
        assert_eq!(pick(7), pick(7));

        let none = mist(&[5e7, 5e7]);
        assert!(random_vm(&none, &TASK, &ctx, &mut rng).is_err());
    }

    #[test]
    fn trade_off_examples() {
        let ctx = PlacementContext::default();
        let mut c = mist(&[1e6, 1e6]);
        c[0].queue_len = 5;
        assert_eq!(trade_off(&c, &TASK, &ctx).unwrap().index, 1);

        let mut c = mist(&[1e6, 1e6]);
        c[1].vm_mips = 100_000.0;
        assert_eq!(trade_off(&c, &TASK, &ctx).unwrap().index, 1);

        let mut c = vec![cand(0, Layer::Mist, 1e6), cand(1, Layer::Cloud, 3.9e7)];
        c[1].vm_mips = 100_000.0;
        let mist_score = trade_off_score(&c[0], &TASK, &ctx);
        let cloud_score = trade_off_score(&c[1], &TASK, &ctx);
        assert!((mist_score - 2.0033).abs() < 1e-4);
        assert!((cloud_score - 0.370).abs() < 1e-3);
        assert_eq!(trade_off(&c, &TASK, &ctx).unwrap().index, 1);
    }

    #[test]
    fn weight_greedy_examples() {
        let ctx = PlacementContext::default();
        let mut c = mist(&[5e6, 1e6, 9e6]);
        c[0].queue_len = 3;
        c[2].queue_len = 2;
        let s = weight_greedy(&c, &TASK, &ctx).unwrap();
        assert_eq!(s.index, 1);
        assert_eq!(s.score, 0.0);

        let same = mist(&[2e6, 2e6, 2e6]);
        assert_eq!(weight_greedy(&same, &TASK, &ctx).unwrap().index, 0);
    }

    #[test]
    fn policy_names() {
        for p in PolicyId::ALL {
            assert_eq!(p.name().parse::<PolicyId>().unwrap(), p);
        }
        assert_eq!("WG".parse::<PolicyId>().unwrap(), PolicyId::WeightGreedy);
        assert_eq!("Distance_Only".parse::<PolicyId>().unwrap(), PolicyId::DistanceOnly);
        assert!("fastest".parse::<PolicyId>().is_err());
    }

    #[test]
    fn works_in_f32() {
        let ctx = PlacementContext::<f32> {
            architecture: LayerMask::ALL,
            link: LinkParams {
                bandwidth_bps: 1e9,
                propagation_speed_mps: 3e8,
                range_by_layer: PerLayer::new(32e6, 36e6, 40e6),
            },
            radio: RadioParams::new(5e-8, 1e-11, 1.3e-15).unwrap(),
            tradeoff_layer_weight: PerLayer::new(1.0, 1.0, 1.2),
        };
        let c: Vec<Candidate<f32>> = [5e6f32, 3e6, 9e6]
            .iter()
            .enumerate()
            .map(|(i, &d)| Candidate {
                vm_id: i,
                host_layer: Layer::Mist,
                distance_m: d,
                queue_len: 0,
                vm_mips: 1e4,
                assigned_count: 0,
            })
            .collect();
        let task = TaskDemand {
            length_mi: 2e4f32,
            input_bits: 8e6,
        };
        assert_eq!(distance_only(&c, &task, &ctx).unwrap().index, 1);
    }
}
