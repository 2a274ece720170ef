//! Reference implementations shared by the integration tests. None of these
//! touch the library's own elimination or cost code.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rhg_core::{BitMatrix, Cell, ChainComplex, LatticeShape, MeasurementPattern};

/// Rank of a dense 0/1 matrix by textbook row reduction.
pub fn naive_rank(rows: &[Vec<u8>]) -> usize {
    let mut m: Vec<Vec<u8>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] == 1) else { continue };
        m.swap(rank, p);
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && row[c] == 1 {
                row.iter_mut().zip(&pivot).for_each(|(x, y)| *x ^= y);
            }
        }
        rank += 1;
    }
    rank
}

pub fn naive_solvable(rows: &[Vec<u8>], b: &[u8]) -> bool {
    let aug: Vec<Vec<u8>> = rows.iter().zip(b).map(|(r, &x)| r.iter().copied().chain([x]).collect()).collect();
    naive_rank(rows) == naive_rank(&aug)
}

pub fn dense(m: &BitMatrix) -> Vec<Vec<u8>> {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| u8::from(m.get(r, c))).collect()).collect()
}

pub fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize, density: f64) -> Vec<Vec<u8>> {
    (0..rows).map(|_| (0..cols).map(|_| u8::from(rng.gen_bool(density))).collect()).collect()
}

/// Fixed-point reals with `FRAC` fractional bits.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fx(BigInt);

const FRAC: usize = 768;

impl Fx {
    pub fn from_f64(x: f64) -> Fx {
        assert!(x.is_finite());
        if x == 0.0 {
            return Fx(BigInt::zero());
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1 << 52) - 1);
        let (mant, e) = if exp == 0 { (frac, -1074) } else { (frac | (1 << 52), exp - 1075) };
        let m = BigInt::from(mant) * sign;
        let shift = e + FRAC as i64;
        assert!(shift >= 0, "value too small for the fixed-point range");
        Fx(m << shift as usize)
    }

    pub fn int(n: i64) -> Fx {
        Fx(BigInt::from(n) << FRAC)
    }

    pub fn ratio(p: i64, q: i64) -> Fx {
        Fx::int(p).div(&Fx::int(q))
    }

    pub fn add(&self, o: &Fx) -> Fx {
        Fx(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Fx) -> Fx {
        Fx(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Fx) -> Fx {
        Fx((&self.0 * &o.0) >> FRAC)
    }

    pub fn div(&self, o: &Fx) -> Fx {
        Fx((&self.0 << FRAC) / &o.0)
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn exp(&self) -> Fx {
        // Halve until small, sum the Taylor series, then square back.
        let mut x = self.clone();
        let mut halvings = 0;
        let limit = BigInt::one() << (FRAC - 6);
        while x.0.abs() > limit {
            x = Fx(x.0 >> 1usize);
            halvings += 1;
        }
        let mut sum = Fx::int(1);
        let mut term = Fx::int(1);
        for k in 1..400 {
            term = term.mul(&x).div(&Fx::int(k));
            if term.0.is_zero() {
                break;
            }
            sum = sum.add(&term);
        }
        for _ in 0..halvings {
            sum = sum.mul(&sum);
        }
        sum
    }

    /// `|self − approx| / |self|` as a double.
    pub fn rel_err(&self, approx: f64) -> f64 {
        let diff = Fx::from_f64(approx).sub(self);
        let scaled = (diff.0.abs() << 80usize) / self.0.abs();
        scaled.to_f64().expect("finite") / 2f64.powi(80)
    }
}

/// Every measured-cell set below is a random subset, so instances are not
/// valid circuits. They are inputs for comparing two decision procedures.
pub struct RandomInstance {
    pub complex: ChainComplex,
    pub pattern: MeasurementPattern,
    pub target: BTreeSet<Cell>,
    pub free: usize,
}

fn random_shape<R: Rng>(rng: &mut R) -> LatticeShape {
    LatticeShape::new(rng.gen_range(2..=4), rng.gen_range(2..=3), rng.gen_range(2..=3)).unwrap()
}

/// Primal instance: all but at most `max_free` faces measured.
pub fn random_primal_instance<R: Rng>(rng: &mut R, max_free: usize) -> RandomInstance {
    let complex = ChainComplex::build(random_shape(rng));
    let faces = complex.cells(2).to_vec();
    let k = rng.gen_range(1..=max_free.min(faces.len()));
    let mut free: BTreeSet<usize> = BTreeSet::new();
    while free.len() < k {
        free.insert(rng.gen_range(0..faces.len()));
    }
    let dual: Vec<Cell> = (0..faces.len()).filter(|i| !free.contains(i)).map(|i| faces[i]).collect();
    let primal: Vec<Cell> = complex.cells(1).iter().copied().filter(|_| rng.gen_bool(0.15)).collect();
    let pattern = MeasurementPattern::new(complex.shape(), primal, dual).unwrap();
    let target = if rng.gen_bool(0.6) {
        // Sum of boundaries of some free faces; usually realisable.
        let mut t = BTreeSet::new();
        for &i in &free {
            if rng.gen_bool(0.5) {
                for e in complex.boundary_of(&faces[i]).unwrap() {
                    if !t.remove(&e.cell) {
                        t.insert(e.cell);
                    }
                }
            }
        }
        t.retain(|e| !pattern.primal_z().contains(e));
        if rng.gen_bool(0.3) {
            let edges = complex.cells(1);
            let e = edges[rng.gen_range(0..edges.len())];
            if !t.remove(&e) {
                t.insert(e);
            }
        }
        t
    } else {
        let edges = complex.cells(1);
        (0..rng.gen_range(0..5)).map(|_| edges[rng.gen_range(0..edges.len())]).collect()
    };
    RandomInstance { complex, pattern, target, free: k }
}

/// Dual instance: all but at most `max_free` non-outermost edges measured.
pub fn random_dual_instance<R: Rng>(rng: &mut R, max_free: usize) -> RandomInstance {
    let complex = ChainComplex::build(LatticeShape::new(rng.gen_range(3..=4), rng.gen_range(3..=4), 3).unwrap());
    let inner: Vec<Cell> = complex.cells(1).iter().copied().filter(|e| !complex.is_outermost_edge(e)).collect();
    let k = rng.gen_range(1..=max_free.min(inner.len()));
    let mut free: BTreeSet<usize> = BTreeSet::new();
    while free.len() < k {
        free.insert(rng.gen_range(0..inner.len()));
    }
    let primal: Vec<Cell> = (0..inner.len()).filter(|i| !free.contains(i)).map(|i| inner[i]).collect();
    let dual: Vec<Cell> = complex.cells(2).iter().copied().filter(|_| rng.gen_bool(0.1)).collect();
    let pattern = MeasurementPattern::new(complex.shape(), primal, dual).unwrap();
    let faces = complex.cells(2);
    let mut target = BTreeSet::new();
    if rng.gen_bool(0.6) {
        // Dual boundary of some free edges: the faces around each edge.
        for &i in &free {
            if rng.gen_bool(0.5) {
                for f in faces {
                    if complex.boundary_of(f).unwrap().iter().any(|r| r.cell == inner[i]) && !target.remove(f) {
                        target.insert(*f);
                    }
                }
            }
        }
        target.retain(|f| !pattern.dual_z().contains(f));
    }
    if target.is_empty() || rng.gen_bool(0.3) {
        let f = faces[rng.gen_range(0..faces.len())];
        target.insert(f);
    }
    RandomInstance { complex, pattern, target, free: k }
}
