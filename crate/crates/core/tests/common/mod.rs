//! Independent brute-force scorers shared by the property and acceptance suites.

use satmist::orchestrate::{Candidate, TaskDemand};
use satmist::{Layer, LayerMask};

pub const RANGES: [f64; 3] = [32e6, 36e6, 40e6];
pub const LAYERS: [Layer; 3] = [Layer::Mist, Layer::EdgeDc, Layer::Cloud];

pub fn ok_feasible(c: &Candidate, mask: LayerMask) -> bool {
    let idx = LAYERS.iter().position(|&l| l == c.host_layer).unwrap();
    mask.contains(c.host_layer) && c.distance_m <= RANGES[idx]
}

/// Lowest index among the minima of `score` over feasible candidates.
pub fn brute_argmin(cands: &[Candidate], mask: LayerMask, score: impl Fn(&Candidate) -> f64) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, c) in cands.iter().enumerate() {
        if !ok_feasible(c, mask) {
            continue;
        }
        let s = score(c);
        match best {
            Some((_, b)) if s >= b => {}
            _ => best = Some((i, s)),
        }
    }
    best.map(|(i, _)| i)
}

pub fn tradeoff_oracle(c: &Candidate, len: f64) -> f64 {
    let w = if c.host_layer == Layer::Cloud { 1.2 } else { 1.0 };
    w * (c.queue_len as f64 + 1.0) * len / c.vm_mips + c.distance_m / 3e8
}

pub fn tx_oracle(bits: f64, d: f64) -> f64 {
    let d0 = (1e-11f64 / 1.3e-15).sqrt();
    if d < d0 {
        bits * (5e-8 + 1e-11 * d * d)
    } else {
        bits * (5e-8 + 1.3e-15 * d.powi(4))
    }
}

pub fn wg_oracle(cands: &[Candidate], mask: LayerMask, task: &TaskDemand) -> Option<usize> {
    let feas: Vec<usize> = (0..cands.len()).filter(|&i| ok_feasible(&cands[i], mask)).collect();
    if feas.is_empty() {
        return None;
    }
    let raw: Vec<[f64; 4]> = feas
        .iter()
        .map(|&i| {
            let c = &cands[i];
            let q = c.queue_len as f64;
            [
                c.distance_m,
                (q + 1.0) * task.length_mi / c.vm_mips,
                q,
                tx_oracle(task.input_bits, c.distance_m),
            ]
        })
        .collect();
    let weights = [6.0, 6.0, 5.0, 3.0];
    let mut lo = [f64::INFINITY; 4];
    let mut hi = [f64::NEG_INFINITY; 4];
    for r in &raw {
        for m in 0..4 {
            lo[m] = lo[m].min(r[m]);
            hi[m] = hi[m].max(r[m]);
        }
    }
    let mut best: Option<(usize, f64)> = None;
    for (k, r) in raw.iter().enumerate() {
        let s: f64 = (0..4)
            .map(|m| {
                let span = hi[m] - lo[m];
                let n = if span > 0.0 { (r[m] - lo[m]) / span } else { 0.0 };
                weights[m] * n
            })
            .sum();
        match best {
            Some((_, b)) if s >= b => {}
            _ => best = Some((feas[k], s)),
        }
    }
    best.map(|(i, _)| i)
}

/// Random start drawn from `rng`, then the first feasible index scanning
/// forward with wrap-around.
pub fn random_vm_oracle<R: rand::Rng>(cands: &[Candidate], mask: LayerMask, rng: &mut R) -> Option<usize> {
    let n = cands.len();
    let start = rng.random_range(0..n);
    (0..n).map(|k| (start + k) % n).find(|&i| ok_feasible(&cands[i], mask))
}
