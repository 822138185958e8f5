use std::cell::Cell;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{SymmetricEdge, UmapError};

const INIT_HALF_WIDTH: f64 = 10.0;
const GRAD_CLIP: f64 = 4.0;
const PARALLEL_CHUNK: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayoutMode {
    /// Single-threaded, fixed edge order and RNG stream: bitwise reproducible.
    #[default]
    SerialDeterministic,
    /// Lock-free concurrent edge updates. Not reproducible.
    Parallel,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutParams {
    pub dim: usize,
    pub epochs: usize,
    pub seed: u64,
    pub mode: LayoutMode,
    pub a: f64,
    pub b: f64,
    pub negative_sample_rate: usize,
    pub repulsion_strength: f64,
    pub learning_rate: f64,
}

impl Default for LayoutParams {
    fn default() -> Self {
        Self {
            dim: 5,
            epochs: 200,
            seed: 42,
            mode: LayoutMode::SerialDeterministic,
            // fit_curve(0.1, 1.0)
            a: 1.576_943_460_269_765,
            b: 0.895_060_877_851_573_3,
            negative_sample_rate: 5,
            repulsion_strength: 1.0,
            learning_rate: 1.0,
        }
    }
}

/// Low-dimensional coordinates, row-major `n x dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutResult {
    pub coords: Vec<f64>,
    pub dim: usize,
    pub epochs_run: usize,
    pub seed: u64,
    pub curve_a: f64,
    pub curve_b: f64,
}

impl LayoutResult {
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }
}

/// Seeded uniform initialization in `[-10, 10]^dim`.
pub fn random_init(n: usize, dim: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n * dim)
        .map(|_| rng.random_range(-INIT_HALF_WIDTH..INIT_HALF_WIDTH))
        .collect()
}

/// Sum over edges of `w * |y_i - y_j|^2`.
pub fn layout_energy(edges: &[SymmetricEdge], coords: &[f64], dim: usize) -> f64 {
    edges
        .iter()
        .map(|e| {
            let (a, b) = (&coords[e.i * dim..(e.i + 1) * dim], &coords[e.j * dim..(e.j + 1) * dim]);
            e.weight * squared_distance(a.iter().copied(), b.iter().copied())
        })
        .sum()
}

fn squared_distance(a: impl Iterator<Item = f64>, b: impl Iterator<Item = f64>) -> f64 {
    a.zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn clip(v: f64) -> f64 {
    v.clamp(-GRAD_CLIP, GRAD_CLIP)
}

trait CoordStore {
    fn get(&self, idx: usize) -> f64;
    fn add(&self, idx: usize, delta: f64);
}

struct SerialCoords(Vec<Cell<f64>>);

impl CoordStore for SerialCoords {
    fn get(&self, idx: usize) -> f64 {
        self.0[idx].get()
    }
    fn add(&self, idx: usize, delta: f64) {
        let cell = &self.0[idx];
        cell.set(cell.get() + delta);
    }
}

/// Racy read-modify-write coordinates. Each cell is always a whole f64, so
/// values stay finite even when concurrent updates are lost.
struct SharedCoords(Vec<AtomicU64>);

impl CoordStore for SharedCoords {
    fn get(&self, idx: usize) -> f64 {
        f64::from_bits(self.0[idx].load(Ordering::Relaxed))
    }
    fn add(&self, idx: usize, delta: f64) {
        let cur = self.get(idx);
        self.0[idx].store((cur + delta).to_bits(), Ordering::Relaxed);
    }
}

/// Per directed edge sampling schedule.
#[derive(Clone, Copy)]
struct EdgeSchedule {
    head: usize,
    tail: usize,
    epochs_per_sample: f64,
    next_sample: f64,
    epochs_per_negative: f64,
    next_negative: f64,
}

struct Step<'a> {
    n: usize,
    dim: usize,
    a: f64,
    b: f64,
    gamma: f64,
    alpha: f64,
    epoch: f64,
    buf: &'a mut Vec<f64>,
}

impl Step<'_> {
    fn run_edge<C: CoordStore, R: Rng>(&mut self, s: &mut EdgeSchedule, coords: &C, rng: &mut R) {
        if s.next_sample > self.epoch {
            return;
        }
        let (dim, a, b) = (self.dim, self.a, self.b);
        let (j, k) = (s.head, s.tail);
        self.buf.clear();
        self.buf
            .extend((0..dim).map(|d| coords.get(j * dim + d) - coords.get(k * dim + d)));
        let dist2: f64 = self.buf.iter().map(|v| v * v).sum();
        if dist2 > 0.0 {
            let coeff = -2.0 * a * b * dist2.powf(b - 1.0) / (a * dist2.powf(b) + 1.0);
            for d in 0..dim {
                let g = clip(coeff * self.buf[d]) * self.alpha;
                coords.add(j * dim + d, g);
                coords.add(k * dim + d, -g);
            }
        }
        s.next_sample += s.epochs_per_sample;

        let n_neg = ((self.epoch - s.next_negative) / s.epochs_per_negative).floor();
        let n_neg = if n_neg > 0.0 { n_neg as usize } else { 0 };
        for _ in 0..n_neg {
            let other = rng.random_range(0..self.n);
            if other == j {
                continue;
            }
            self.buf.clear();
            self.buf
                .extend((0..dim).map(|d| coords.get(j * dim + d) - coords.get(other * dim + d)));
            let dist2: f64 = self.buf.iter().map(|v| v * v).sum();
            if dist2 <= 0.0 {
                continue;
            }
            let coeff = 2.0 * self.gamma * b / ((0.001 + dist2) * (a * dist2.powf(b) + 1.0));
            for d in 0..dim {
                coords.add(j * dim + d, clip(coeff * self.buf[d]) * self.alpha);
            }
        }
        s.next_negative += n_neg as f64 * s.epochs_per_negative;
    }
}

/// Stochastic layout of a symmetric fuzzy graph.
///
/// Each undirected edge is sampled in both directions on a schedule
/// proportional to its weight; every sample pulls the two endpoints together
/// and pushes the head away from `negative_sample_rate` random points per
/// epoch of sampling. The learning rate decays linearly to zero. Edges with
/// weight below `max_weight / epochs` are never sampled.
pub fn optimize_layout(edges: &[SymmetricEdge], n: usize, params: &LayoutParams) -> Result<LayoutResult, UmapError> {
    if edges.is_empty() {
        return Err(UmapError::InvalidParams("layout needs at least one edge".into()));
    }
    if params.dim < 2 {
        return Err(UmapError::InvalidParams("layout dimension must be at least 2".into()));
    }
    if let Some(e) = edges.iter().find(|e| e.i >= n || e.j >= n) {
        return Err(UmapError::InvalidParams(format!(
            "edge ({}, {}) out of range for {n} points",
            e.i, e.j
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let init = random_init(n, params.dim, &mut rng);

    let epochs = params.epochs;
    let max_w = edges.iter().map(|e| e.weight).fold(0.0, f64::max);
    let neg_rate = params.negative_sample_rate.max(1) as f64;
    let mut schedule: Vec<EdgeSchedule> = Vec::with_capacity(edges.len() * 2);
    for e in edges {
        if epochs > 0 && e.weight < max_w / epochs as f64 {
            continue;
        }
        let eps = max_w / e.weight;
        for (head, tail) in [(e.i, e.j), (e.j, e.i)] {
            schedule.push(EdgeSchedule {
                head,
                tail,
                epochs_per_sample: eps,
                next_sample: eps,
                epochs_per_negative: eps / neg_rate,
                next_negative: eps / neg_rate,
            });
        }
    }

    let coords = match params.mode {
        LayoutMode::SerialDeterministic => {
            let store = SerialCoords(init.into_iter().map(Cell::new).collect());
            let mut buf = Vec::with_capacity(params.dim);
            for epoch in 0..epochs {
                let mut step = Step {
                    n,
                    dim: params.dim,
                    a: params.a,
                    b: params.b,
                    gamma: params.repulsion_strength,
                    alpha: params.learning_rate * (1.0 - epoch as f64 / epochs as f64),
                    epoch: epoch as f64,
                    buf: &mut buf,
                };
                for s in schedule.iter_mut() {
                    step.run_edge(s, &store, &mut rng);
                }
            }
            store.0.into_iter().map(Cell::into_inner).collect()
        }
        LayoutMode::Parallel => {
            let store = SharedCoords(init.into_iter().map(|v| AtomicU64::new(v.to_bits())).collect());
            for epoch in 0..epochs {
                let alpha = params.learning_rate * (1.0 - epoch as f64 / epochs as f64);
                schedule
                    .par_chunks_mut(PARALLEL_CHUNK)
                    .enumerate()
                    .for_each(|(chunk, edges)| {
                        let mut rng = ChaCha8Rng::seed_from_u64(params.seed ^ ((epoch as u64) << 32) ^ chunk as u64);
                        let mut buf = Vec::with_capacity(params.dim);
                        let mut step = Step {
                            n,
                            dim: params.dim,
                            a: params.a,
                            b: params.b,
                            gamma: params.repulsion_strength,
                            alpha,
                            epoch: epoch as f64,
                            buf: &mut buf,
                        };
                        for s in edges.iter_mut() {
                            step.run_edge(s, &store, &mut rng);
                        }
                    });
            }
            store.0.into_iter().map(|v| f64::from_bits(v.into_inner())).collect()
        }
    };

    Ok(LayoutResult {
        coords,
        dim: params.dim,
        epochs_run: epochs,
        seed: params.seed,
        curve_a: params.a,
        curve_b: params.b,
    })
}
