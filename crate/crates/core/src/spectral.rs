//! Certified enclosures of the spectral radius.
//!
//! Every bound is an exact rational produced by Collatz–Wielandt ratios
//! `min_i (Ax)_i / x_i <= ρ(A) <= max_i (Ax)_i / x_i` for a positive `x`.
//! The radius of a reducible matrix is the maximum over its SCC blocks, so
//! each block is enclosed separately:
//!
//! * trivial blocks contribute exactly 0 and circles exactly 1;
//! * primitive blocks run exact power iteration from the all-ones vector;
//! * a block of period `p` is split into its `p` cyclic classes, each a
//!   primitive block of `B^p` with radius `ρ^p`; the enclosure of `ρ^p` is
//!   pulled back through rational `p`-th roots.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use thiserror::Error;

use crate::digraph::{component_period, cyclic_classes, graph_of, restrict, scc_decompose, ComponentKind};
use crate::error::ParseError;
use crate::exact::{parse_rational, rational_to_string, root_bounds, to_f64};
use crate::intmatrix::{ConeVector, NonNegIntMatrix};

/// Iteration cap per component.
pub const DEFAULT_MAX_ITERATIONS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("matrix is not irreducible")]
    NotIrreducible,
    #[error("witness coordinate {index} is not strictly positive")]
    NonPositiveWitness { index: usize },
    #[error("witness has dimension {found}, matrix has {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("gap must be strictly positive")]
    NonPositiveGap,
    #[error("gap not reached after {cap} iterations; partial enclosure {partial}")]
    GapNotReached { cap: usize, partial: Box<SpectralInterval> },
    #[error("graph has no cycle; spectral radius is 0")]
    Acyclic,
}

/// Exact rational bounds `lower <= ρ <= upper` and the vector that produced them.
///
/// For a reducible matrix the witness is supported on the block attaining
/// the lower bound. For a periodic block it is a witness for `B^p` on one
/// cyclic class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralInterval {
    lower: BigRational,
    upper: BigRational,
    witness: ConeVector,
}

impl SpectralInterval {
    fn new(lower: BigRational, upper: BigRational, witness: ConeVector) -> Self {
        debug_assert!(lower <= upper, "enclosure must be ordered");
        Self { lower, upper, witness }
    }

    pub fn lower(&self) -> &BigRational {
        &self.lower
    }

    pub fn upper(&self) -> &BigRational {
        &self.upper
    }

    pub fn witness(&self) -> &ConeVector {
        &self.witness
    }

    pub fn width(&self) -> BigRational {
        &self.upper - &self.lower
    }

    pub fn is_exact(&self) -> bool {
        self.lower == self.upper
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lower <= x && x <= &self.upper
    }

    /// Midpoint as a float, for display only.
    pub fn approx(&self) -> f64 {
        (to_f64(&self.lower) + to_f64(&self.upper)) / 2.0
    }

    /// `{"lower": "p/q", "upper": "p/q"}`
    pub fn to_json_value(&self) -> Value {
        json!({ "lower": rational_to_string(&self.lower), "upper": rational_to_string(&self.upper) })
    }

    /// Reads back the bounds written by [`Self::to_json_value`].
    pub fn bounds_from_json(value: &Value) -> Result<(BigRational, BigRational), ParseError> {
        let field = |name: &str| {
            value
                .get(name)
                .and_then(Value::as_str)
                .ok_or_else(|| ParseError::Schema(format!("missing string field `{name}`")))
                .and_then(parse_rational)
        };
        Ok((field("lower")?, field("upper")?))
    }
}

impl std::fmt::Display for SpectralInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}, {}]", rational_to_string(&self.lower), rational_to_string(&self.upper))
    }
}

fn ratio(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}

/// `(min y_i/x_i, max y_i/x_i)` for strictly positive `x`.
///
/// Candidates are compared by cross-multiplication so only the two
/// extremes are ever reduced to lowest terms.
fn ratio_bounds(x: &[BigUint], y: &[BigUint]) -> (BigRational, BigRational) {
    let less = |i: usize, j: usize| &y[i] * &x[j] < &y[j] * &x[i];
    let (mut lo, mut hi) = (0, 0);
    for i in 1..x.len() {
        if less(i, lo) {
            lo = i;
        }
        if less(hi, i) {
            hi = i;
        }
    }
    (ratio(&y[lo], &x[lo]), ratio(&y[hi], &x[hi]))
}

/// Collatz–Wielandt bounds of an irreducible `A` at a strictly positive `x`.
pub fn collatz_wielandt(a: &NonNegIntMatrix, x: &ConeVector) -> Result<SpectralInterval, SpectralError> {
    if x.dim() != a.dim() {
        return Err(SpectralError::DimensionMismatch { expected: a.dim(), found: x.dim() });
    }
    if scc_decompose(&graph_of(a)).components().len() != 1 {
        return Err(SpectralError::NotIrreducible);
    }
    if let Some(i) = x.coords().iter().position(|c| !c.is_positive()) {
        return Err(SpectralError::NonPositiveWitness { index: i + 1 });
    }
    let ax = a.apply(x.coords());
    let mut ratios = ax.iter().zip(x.coords()).map(|(y, xi)| y / xi);
    let first = ratios.next().expect("nonempty");
    let (lower, upper) = ratios
        .fold((first.clone(), first), |(lo, hi), r| (if r < lo { r.clone() } else { lo }, if r > hi { r } else { hi }));
    Ok(SpectralInterval::new(lower, upper, x.clone()))
}

/// Exact power iteration `x <- A x` on a primitive irreducible block.
///
/// Integer vectors keep every ratio exact; dropping a common power of two
/// rescales without changing any ratio. The bounds are monotone: lower
/// never decreases and upper never increases.
#[derive(Debug, Clone)]
struct PowerIteration {
    matrix: NonNegIntMatrix,
    x: Vec<BigUint>,
    y: Vec<BigUint>,
    lower: BigRational,
    upper: BigRational,
}

impl PowerIteration {
    fn new(matrix: NonNegIntMatrix) -> Self {
        let x = vec![BigUint::one(); matrix.dim()];
        let y = matrix.apply_int(&x);
        let (lower, upper) = ratio_bounds(&x, &y);
        Self { matrix, x, y, lower, upper }
    }

    fn step(&mut self) {
        let mut x = std::mem::take(&mut self.y);
        let shift = x.iter().filter_map(|v| v.trailing_zeros()).min().unwrap_or(0);
        if shift > 0 {
            for v in &mut x {
                *v >>= shift;
            }
        }
        let y = self.matrix.apply_int(&x);
        let (lower, upper) = ratio_bounds(&x, &y);
        debug_assert!(lower >= self.lower && upper <= self.upper, "Collatz-Wielandt bounds are monotone");
        self.x = x;
        self.y = y;
        self.lower = lower;
        self.upper = upper;
    }

    fn is_exact(&self) -> bool {
        self.lower == self.upper
    }
}

/// `Some(r)` if `x = r^p` for a rational `r`.
fn exact_root(x: &BigRational, p: u32) -> Option<BigRational> {
    let root = |v: &BigInt| -> Option<BigInt> {
        let r = v.magnitude().nth_root(p);
        (num_traits::Pow::pow(&r, p) == *v.magnitude()).then(|| BigInt::from(r))
    };
    Some(BigRational::new(root(x.numer())?, root(x.denom())?))
}

#[derive(Debug, Clone)]
enum Enclosure {
    /// Exact value with a local witness.
    Fixed {
        value: BigRational,
        witness: Vec<BigUint>,
    },
    Primitive(PowerIteration),
    /// Cyclic classes (as local indices) of a period-`p` block, each iterated under `B^p`.
    Periodic {
        period: u32,
        classes: Vec<(Vec<usize>, PowerIteration)>,
    },
}

/// Incrementally refinable enclosure for one SCC.
#[derive(Debug, Clone)]
struct ComponentEnclosure {
    vertices: Vec<usize>,
    kind: ComponentKind,
    enclosure: Enclosure,
    steps: usize,
}

impl ComponentEnclosure {
    fn build(a: &NonNegIntMatrix) -> Vec<ComponentEnclosure> {
        let g = graph_of(a);
        let scc = scc_decompose(&g);
        scc.components()
            .iter()
            .enumerate()
            .map(|(c, vertices)| {
                let kind = scc.kind(c);
                let size = vertices.len();
                let enclosure = match kind {
                    ComponentKind::Trivial => {
                        Enclosure::Fixed { value: BigRational::zero(), witness: vec![BigUint::one()] }
                    }
                    ComponentKind::Circle => {
                        Enclosure::Fixed { value: BigRational::one(), witness: vec![BigUint::one(); size] }
                    }
                    ComponentKind::Expanding => {
                        let block = restrict(a, vertices).expect("component is nonempty");
                        let period = component_period(&g, &scc, c).expect("nontrivial component");
                        if period == 1 {
                            Enclosure::Primitive(PowerIteration::new(block))
                        } else {
                            let power = block.pow(period as u64);
                            let classes = cyclic_classes(&g, &scc, c, period)
                                .into_iter()
                                .map(|class| {
                                    let local: Vec<usize> = class
                                        .iter()
                                        .map(|v| vertices.binary_search(v).expect("class inside component"))
                                        .collect();
                                    let sub = restrict(&power, &local).expect("class is nonempty");
                                    (local, PowerIteration::new(sub))
                                })
                                .collect();
                            Enclosure::Periodic { period: period as u32, classes }
                        }
                    }
                };
                ComponentEnclosure { vertices: vertices.clone(), kind, enclosure, steps: 0 }
            })
            .collect()
    }

    /// Combined `(max lower, min upper)` over cyclic classes, bounding `ρ^p`.
    fn periodic_inner(classes: &[(Vec<usize>, PowerIteration)]) -> (BigRational, BigRational) {
        let lower = classes.iter().map(|(_, it)| &it.lower).max().expect("at least one class").clone();
        let upper = classes.iter().map(|(_, it)| &it.upper).min().expect("at least one class").clone();
        (lower, upper)
    }

    fn is_exact(&self) -> bool {
        match &self.enclosure {
            Enclosure::Fixed { .. } => true,
            Enclosure::Primitive(it) => it.is_exact(),
            Enclosure::Periodic { period, classes } => {
                let (lower, upper) = Self::periodic_inner(classes);
                lower == upper && exact_root(&lower, *period).is_some()
            }
        }
    }

    /// Whether the enclosure reported at `gap` is at most `gap` wide.
    fn reached(&self, gap: &BigRational) -> bool {
        match &self.enclosure {
            Enclosure::Fixed { .. } => true,
            Enclosure::Primitive(it) => &it.upper - &it.lower <= *gap,
            Enclosure::Periodic { period, classes } => {
                let (lower, upper) = Self::periodic_inner(classes);
                if lower == upper {
                    return true;
                }
                // For ρ^p >= 1 the p-th root contracts widths by at least p,
                // and each root end adds at most gap/4 of bisection slack.
                let budget =
                    gap * BigRational::from_integer(BigInt::from(*period)) / BigRational::from_integer(2.into());
                lower >= BigRational::one() && upper - lower <= budget
            }
        }
    }

    fn step(&mut self) {
        match &mut self.enclosure {
            Enclosure::Fixed { .. } => {}
            Enclosure::Primitive(it) => it.step(),
            Enclosure::Periodic { classes, .. } => classes.iter_mut().for_each(|(_, it)| it.step()),
        }
        self.steps += 1;
    }

    fn refine(&mut self, gap: &BigRational, cap: usize) -> bool {
        while !self.is_exact() && !self.reached(gap) {
            if self.steps >= cap {
                return false;
            }
            self.step();
        }
        true
    }

    /// Current enclosure in global coordinates; `gap` sets root-bisection precision.
    fn interval(&self, n: usize, gap: &BigRational) -> SpectralInterval {
        let embed = |local: &[usize], values: &[BigUint]| {
            let mut full = vec![BigUint::zero(); n];
            for (&l, v) in local.iter().zip(values) {
                full[self.vertices[l]] = v.clone();
            }
            ConeVector::from_integers(&full).expect("witness is nonzero")
        };
        let all: Vec<usize> = (0..self.vertices.len()).collect();
        match &self.enclosure {
            Enclosure::Fixed { value, witness } => {
                SpectralInterval::new(value.clone(), value.clone(), embed(&all, witness))
            }
            Enclosure::Primitive(it) => SpectralInterval::new(it.lower.clone(), it.upper.clone(), embed(&all, &it.x)),
            Enclosure::Periodic { period, classes } => {
                let (inner_lower, inner_upper) = Self::periodic_inner(classes);
                let tol = gap / BigRational::from_integer(4.into());
                let lower =
                    exact_root(&inner_lower, *period).unwrap_or_else(|| root_bounds(&inner_lower, *period, &tol).0);
                let upper =
                    exact_root(&inner_upper, *period).unwrap_or_else(|| root_bounds(&inner_upper, *period, &tol).1);
                let (local, it) = classes
                    .iter()
                    .find(|(_, it)| it.lower == inner_lower)
                    .expect("some class attains the max lower bound");
                SpectralInterval::new(lower, upper, embed(local, &it.x))
            }
        }
    }
}

/// Max over blocks: `[max lower, max upper]`, witness from the block with the largest lower bound.
fn combine(n: usize, parts: &[ComponentEnclosure], gap: &BigRational) -> SpectralInterval {
    let intervals: Vec<SpectralInterval> = parts.iter().map(|p| p.interval(n, gap)).collect();
    let best = (0..intervals.len())
        .rev()
        .max_by(|&a, &b| intervals[a].lower.cmp(&intervals[b].lower))
        .expect("at least one component");
    let upper = intervals.iter().map(|i| &i.upper).max().expect("nonempty").clone();
    let chosen = &intervals[best];
    SpectralInterval::new(chosen.lower.clone(), upper, chosen.witness.clone())
}

#[derive(Debug, Clone)]
pub struct SpectralOptions {
    pub max_iterations: usize,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self { max_iterations: DEFAULT_MAX_ITERATIONS }
    }
}

/// Encloses `ρ(A)` within `gap` using the default iteration cap.
pub fn spectral_radius(a: &NonNegIntMatrix, gap: &BigRational) -> Result<SpectralInterval, SpectralError> {
    spectral_radius_with(a, gap, &SpectralOptions::default())
}

pub fn spectral_radius_with(
    a: &NonNegIntMatrix,
    gap: &BigRational,
    options: &SpectralOptions,
) -> Result<SpectralInterval, SpectralError> {
    if !gap.is_positive() {
        return Err(SpectralError::NonPositiveGap);
    }
    let mut parts = ComponentEnclosure::build(a);
    let mut reached = true;
    for part in &mut parts {
        reached &= part.refine(gap, options.max_iterations);
    }
    let interval = combine(a.dim(), &parts, gap);
    if reached {
        Ok(interval)
    } else {
        Err(SpectralError::GapNotReached { cap: options.max_iterations, partial: Box::new(interval) })
    }
}

/// The block carrying the leading eigenvalue.
#[derive(Debug, Clone)]
pub struct DominantComponent {
    /// Vertices (0-based, ascending) of the chosen SCC.
    pub vertices: Vec<usize>,
    pub kind: ComponentKind,
    /// Enclosure of the chosen block's radius, which equals `ρ(A)`.
    pub interval: SpectralInterval,
    /// Other blocks whose enclosures could not be separated from the chosen one.
    pub unresolved: Vec<Vec<usize>>,
}

/// Separation stops refining below this width and reports a tie instead.
fn separation_floor() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 128u32)
}

/// Finds the SCC whose radius equals `ρ(A)`.
///
/// Blocks are refined with gaps `2^-8, 2^-16, ...` until the chosen block's
/// lower bound is strictly above every other block's upper bound. Blocks
/// that stay inseparable (equal radii, or the floor/cap was hit) are
/// reported in `unresolved`, and the one with the smallest vertex wins.
pub fn dominant_component(a: &NonNegIntMatrix) -> Result<DominantComponent, SpectralError> {
    dominant_component_with(a, &SpectralOptions::default())
}

pub fn dominant_component_with(
    a: &NonNegIntMatrix,
    options: &SpectralOptions,
) -> Result<DominantComponent, SpectralError> {
    let n = a.dim();
    let mut parts: Vec<ComponentEnclosure> =
        ComponentEnclosure::build(a).into_iter().filter(|p| p.kind != ComponentKind::Trivial).collect();
    if parts.is_empty() {
        return Err(SpectralError::Acyclic);
    }
    let floor = separation_floor();
    let mut gap = BigRational::new(BigInt::one(), BigInt::from(256u32));
    loop {
        let mut stalled = false;
        for part in &mut parts {
            stalled |= !part.refine(&gap, options.max_iterations);
        }
        let intervals: Vec<SpectralInterval> = parts.iter().map(|p| p.interval(n, &gap)).collect();
        // parts are ordered by smallest vertex; prefer the earliest on equal lower bounds
        let best =
            (0..parts.len()).rev().max_by(|&x, &y| intervals[x].lower.cmp(&intervals[y].lower)).expect("nonempty");
        let rivals: Vec<usize> =
            (0..parts.len()).filter(|&c| c != best && intervals[c].upper >= intervals[best].lower).collect();
        let all_exact = parts[best].is_exact() && rivals.iter().all(|&c| parts[c].is_exact());
        if rivals.is_empty() || all_exact || stalled || gap <= floor {
            let mut contenders = rivals;
            contenders.push(best);
            let winner = *contenders.iter().min_by_key(|&&c| parts[c].vertices[0]).expect("nonempty");
            let unresolved = contenders.iter().filter(|&&c| c != winner).map(|&c| parts[c].vertices.clone()).collect();
            return Ok(DominantComponent {
                vertices: parts[winner].vertices.clone(),
                kind: parts[winner].kind,
                interval: intervals[winner].clone(),
                unresolved,
            });
        }
        gap /= BigRational::from_integer(BigInt::from(256u32));
    }
}
