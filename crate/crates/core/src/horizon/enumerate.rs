//! Enumeration and sampling of symplectic groups over small fields.

use std::collections::{HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactalg::{Field, Matrix, Scalar, Vector};
use crate::phasespace::PhaseSpace;

/// Feasibility caps for exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationLimits {
    /// Largest vector-space dimension accepted.
    pub max_dim: usize,
    /// Above this many raw candidates (`p^(d²)`) the generator closure is used.
    pub naive_candidates: u128,
    /// Largest group the closure path may build.
    pub closure_elements: usize,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits {
            max_dim: 4,
            naive_candidates: 100_000_000,
            closure_elements: 2_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnumerationPath {
    Filter,
    Closure,
}

/// Small dense matrices over ℤ_p as flat row-major residues.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Packed {
    pub p: u32,
    pub d: usize,
}

impl Packed {
    fn new(space: &PhaseSpace) -> Result<Self> {
        let p = space
            .field()
            .modulus()
            .ok_or(Error::NotEnumerable("the symplectic group"))?;
        if p > 255 {
            return Err(Error::CapExceeded(format!("modulus {p} is too large to enumerate")));
        }
        Ok(Packed { p, d: space.dim() })
    }

    pub fn pack(&self, m: &Matrix) -> Vec<u8> {
        (0..self.d)
            .flat_map(|r| (0..self.d).map(move |c| (r, c)))
            .map(|(r, c)| m.get(r, c).residue().expect("prime field") as u8)
            .collect()
    }

    pub fn unpack(&self, data: &[u8]) -> Matrix {
        let field = Field::Prime(self.p);
        let entries: Vec<Scalar> = data.iter().map(|&x| field.element(x as u32)).collect();
        Matrix::new(field, self.d, self.d, entries).expect("square data")
    }

    pub fn mul(&self, a: &[u8], b: &[u8]) -> Vec<u8> {
        let d = self.d;
        let mut out = vec![0u8; d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0u32;
                for k in 0..d {
                    acc += a[i * d + k] as u32 * b[k * d + j] as u32;
                }
                out[i * d + j] = (acc % self.p) as u8;
            }
        }
        out
    }

    /// `MᵀΩM = Ω`, checked column pair by column pair.
    pub fn is_symplectic(&self, omega: &[u8], m: &[u8]) -> bool {
        let d = self.d;
        let col = |c: usize| -> Vec<u32> { (0..d).map(|r| m[r * d + c] as u32).collect() };
        let cols: Vec<Vec<u32>> = (0..d).map(col).collect();
        let ocols: Vec<Vec<u32>> = cols.iter().map(|c| self.omega_mul(omega, c)).collect();
        for i in 0..d {
            for j in i + 1..d {
                let w: u32 = cols[i].iter().zip(&ocols[j]).map(|(a, b)| a * b).sum::<u32>() % self.p;
                if w != omega[i * d + j] as u32 {
                    return false;
                }
            }
        }
        true
    }

    fn omega_mul(&self, omega: &[u8], v: &[u32]) -> Vec<u32> {
        let d = self.d;
        (0..d)
            .map(|r| (0..d).map(|c| omega[r * d + c] as u32 * v[c]).sum::<u32>() % self.p)
            .collect()
    }

    fn all_vectors(&self) -> Vec<Vec<u32>> {
        let count = (self.p as usize).pow(self.d as u32);
        (0..count)
            .map(|mut i| {
                let mut v = vec![0u32; self.d];
                for slot in v.iter_mut().rev() {
                    *slot = (i % self.p as usize) as u32;
                    i /= self.p as usize;
                }
                v
            })
            .collect()
    }

    fn decode_candidate(&self, mut idx: u128) -> Vec<u8> {
        let n = self.d * self.d;
        let mut out = vec![0u8; n];
        for slot in out.iter_mut().rev() {
            *slot = (idx % self.p as u128) as u8;
            idx /= self.p as u128;
        }
        out
    }
}

/// Every element of `Sp(V)` for a finite field, each exactly once.
#[derive(Debug, Clone)]
pub struct SymplecticGroup {
    space: PhaseSpace,
    packed: Packed,
    elements: Vec<Vec<u8>>,
    path: EnumerationPath,
}

impl SymplecticGroup {
    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn path(&self) -> EnumerationPath {
        self.path
    }

    pub fn matrix(&self, i: usize) -> Matrix {
        self.packed.unpack(&self.elements[i])
    }

    pub fn matrices(&self) -> impl Iterator<Item = Matrix> + '_ {
        self.elements.iter().map(|e| self.packed.unpack(e))
    }

    pub fn par_matrices(&self) -> impl IndexedParallelIterator<Item = Matrix> + '_ {
        self.elements.par_iter().map(|e| self.packed.unpack(e))
    }

    pub(crate) fn packed_elements(&self) -> &[Vec<u8>] {
        &self.elements
    }

    pub(crate) fn packing(&self) -> Packed {
        self.packed
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        let key = self.packed.pack(m);
        self.elements.iter().any(|e| *e == key)
    }
}

/// `p^(d²)` if it fits.
pub fn naive_candidate_count(space: &PhaseSpace) -> Result<u128> {
    let p = space
        .field()
        .modulus()
        .ok_or(Error::NotEnumerable("the symplectic group"))? as u128;
    let mut n = 1u128;
    for _ in 0..space.dim() * space.dim() {
        n = n.saturating_mul(p);
    }
    Ok(n)
}

/// Enumerates `Sp(V)`. Small cases filter candidates by the gate, building
/// matrices column by column and pruning any prefix that already violates
/// it. Larger cases take the closure of the identity under transvections.
pub fn enumerate_symplectic(space: &PhaseSpace, limits: &EnumerationLimits) -> Result<SymplecticGroup> {
    let packed = Packed::new(space)?;
    if space.dim() > limits.max_dim {
        return Err(Error::CapExceeded(format!(
            "dimension {} exceeds the enumeration cap {}",
            space.dim(),
            limits.max_dim
        )));
    }
    let omega = packed.pack(space.omega());
    if naive_candidate_count(space)? <= limits.naive_candidates {
        let elements = filter_by_columns(&packed, &omega);
        Ok(SymplecticGroup {
            space: space.clone(),
            packed,
            elements,
            path: EnumerationPath::Filter,
        })
    } else {
        let elements = closure(space, &packed, limits.closure_elements)?;
        Ok(SymplecticGroup {
            space: space.clone(),
            packed,
            elements,
            path: EnumerationPath::Closure,
        })
    }
}

/// Forces the closure path regardless of size.
pub fn enumerate_by_closure(space: &PhaseSpace, limits: &EnumerationLimits) -> Result<SymplecticGroup> {
    let packed = Packed::new(space)?;
    let elements = closure(space, &packed, limits.closure_elements)?;
    Ok(SymplecticGroup {
        space: space.clone(),
        packed,
        elements,
        path: EnumerationPath::Closure,
    })
}

fn filter_by_columns(packed: &Packed, omega: &[u8]) -> Vec<Vec<u8>> {
    let d = packed.d;
    let p = packed.p;
    let vectors = packed.all_vectors();
    let images: Vec<Vec<u32>> = vectors.iter().map(|v| packed.omega_mul(omega, v)).collect();
    let pair = |a: usize, b: usize| -> u32 {
        vectors[a].iter().zip(&images[b]).map(|(x, y)| x * y).sum::<u32>() % p
    };

    fn extend(
        cols: &mut Vec<usize>,
        d: usize,
        n: usize,
        omega: &[u8],
        pair: &dyn Fn(usize, usize) -> u32,
        out: &mut Vec<Vec<usize>>,
    ) {
        let j = cols.len();
        if j == d {
            out.push(cols.clone());
            return;
        }
        for v in 0..n {
            if cols.iter().enumerate().all(|(i, &c)| pair(c, v) == omega[i * d + j] as u32) {
                cols.push(v);
                extend(cols, d, n, omega, pair, out);
                cols.pop();
            }
        }
    }

    let n = vectors.len();
    let found: Vec<Vec<Vec<usize>>> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut out = Vec::new();
            extend(&mut vec![first], d, n, omega, &pair, &mut out);
            out
        })
        .collect();
    found
        .into_iter()
        .flatten()
        .map(|cols| {
            let mut m = vec![0u8; d * d];
            for (c, &vi) in cols.iter().enumerate() {
                for r in 0..d {
                    m[r * d + c] = vectors[vi][r] as u8;
                }
            }
            m
        })
        .collect()
}

/// Transvections `x ↦ x + λ ω(x, v) v` for `v ∈ {e_i, e_i + e_j}` and `λ ≠ 0`.
pub fn transvection_generators(space: &PhaseSpace, scalars: &[Scalar]) -> Vec<Matrix> {
    let field = space.field();
    let d = space.dim();
    let mut dirs = Vec::new();
    for i in 0..d {
        dirs.push(Vector::unit(field, d, i));
        for j in i + 1..d {
            dirs.push(&Vector::unit(field, d, i) + &Vector::unit(field, d, j));
        }
    }
    let mut out = Vec::new();
    for v in &dirs {
        let ov = space.omega().mul_vec(v);
        let outer = &v.as_column() * &ov.as_row();
        for lambda in scalars {
            out.push(&Matrix::identity(field, d) + &outer.scale(lambda));
        }
    }
    out
}

fn nonzero_scalars(field: Field) -> Vec<Scalar> {
    match field {
        Field::Prime(p) => (1..p).map(|i| field.element(i)).collect(),
        Field::Rationals => [(1, 1), (-1, 1), (2, 1), (-2, 1), (1, 2), (-1, 2)]
            .iter()
            .map(|&(n, d)| field.from_ratio(n, d).expect("nonzero denominator"))
            .collect(),
    }
}

fn closure(space: &PhaseSpace, packed: &Packed, cap: usize) -> Result<Vec<Vec<u8>>> {
    let gens: Vec<Vec<u8>> = transvection_generators(space, &nonzero_scalars(space.field()))
        .iter()
        .map(|g| packed.pack(g))
        .collect();
    let id = packed.pack(&Matrix::identity(space.field(), space.dim()));
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut order = vec![id.clone()];
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(h) = queue.pop_front() {
        for g in &gens {
            let next = packed.mul(g, &h);
            if seen.insert(next.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded(format!(
                        "symplectic group of {space} has more than {cap} elements"
                    )));
                }
                order.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(order)
}

/// Literal filter of every candidate matrix through the gate. Refuses more
/// than `cap` candidates.
pub fn naive_gate_filter(space: &PhaseSpace, cap: u128) -> Result<Vec<Matrix>> {
    let packed = Packed::new(space)?;
    let total = naive_candidate_count(space)?;
    if total > cap {
        return Err(Error::CapExceeded(format!("{total} candidate matrices")));
    }
    let omega = packed.pack(space.omega());
    let hits: Vec<Vec<u8>> = (0..total)
        .into_par_iter()
        .map(|i| packed.decode_candidate(i))
        .filter(|m| packed.is_symplectic(&omega, m))
        .collect();
    Ok(hits.iter().map(|m| packed.unpack(m)).collect())
}

/// Result of comparing the gate on a random subset of candidates against
/// membership in an enumerated group.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SampleCrossCheck {
    pub seed: u64,
    pub fraction: f64,
    pub candidates_total: u128,
    pub candidates_sampled: u64,
    pub passed_gate: u64,
    pub disagreements: u64,
    /// `passed_gate / candidates_sampled · candidates_total`.
    pub estimated_order: f64,
}

/// Keeps each candidate independently with probability `fraction` and checks
/// that it passes the gate exactly when the group contains it.
pub fn sample_cross_check(group: &SymplecticGroup, fraction: f64, seed: u64) -> Result<SampleCrossCheck> {
    let packed = group.packing();
    let total = naive_candidate_count(group.space())?;
    if total > u64::MAX as u128 {
        return Err(Error::CapExceeded(format!("{total} candidate matrices")));
    }
    let omega = packed.pack(group.space().omega());
    let members: HashSet<&[u8]> = group.packed_elements().iter().map(Vec::as_slice).collect();
    let chunk = 1u64 << 20;
    let chunks = (total as u64).div_ceil(chunk);
    let partial: Vec<(u64, u64, u64)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let (mut sampled, mut passed, mut bad) = (0u64, 0u64, 0u64);
            let end = ((c + 1) * chunk).min(total as u64);
            for i in c * chunk..end {
                if !rng.gen_bool(fraction) {
                    continue;
                }
                sampled += 1;
                let m = packed.decode_candidate(i as u128);
                let gate = packed.is_symplectic(&omega, &m);
                passed += gate as u64;
                if gate != members.contains(m.as_slice()) {
                    bad += 1;
                }
            }
            (sampled, passed, bad)
        })
        .collect();
    let (sampled, passed, bad) = partial
        .iter()
        .fold((0, 0, 0), |acc, x| (acc.0 + x.0, acc.1 + x.1, acc.2 + x.2));
    Ok(SampleCrossCheck {
        seed,
        fraction,
        candidates_total: total,
        candidates_sampled: sampled,
        passed_gate: passed,
        disagreements: bad,
        estimated_order: if sampled == 0 { 0.0 } else { passed as f64 / sampled as f64 * total as f64 },
    })
}

/// Seeded random words in transvection generators.
pub struct WordSampler {
    space: PhaseSpace,
    gens: Vec<Matrix>,
    rng: ChaCha8Rng,
    word_length: usize,
}

impl WordSampler {
    pub fn new(space: &PhaseSpace, seed: u64, word_length: usize) -> Self {
        let gens = transvection_generators(space, &nonzero_scalars(space.field()));
        WordSampler {
            space: space.clone(),
            gens,
            rng: ChaCha8Rng::seed_from_u64(seed),
            word_length,
        }
    }

    pub fn next_matrix(&mut self) -> Matrix {
        let mut m = Matrix::identity(self.space.field(), self.space.dim());
        for _ in 0..self.word_length {
            let g = &self.gens[self.rng.gen_range(0..self.gens.len())];
            m = g * &m;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::is_symplectic;

    fn space(p: u32, n: usize) -> PhaseSpace {
        PhaseSpace::new(Field::Prime(p), n).unwrap()
    }

    #[test]
    fn small_orders() {
        let lim = EnumerationLimits::default();
        assert_eq!(enumerate_symplectic(&space(2, 1), &lim).unwrap().order(), 6);
        assert_eq!(enumerate_symplectic(&space(3, 1), &lim).unwrap().order(), 24);
        assert_eq!(enumerate_symplectic(&space(5, 1), &lim).unwrap().order(), 120);
    }

    #[test]
    fn naive_filter_matches_dim_two() {
        for p in [2, 3, 5] {
            let v = space(p, 1);
            let g = enumerate_symplectic(&v, &EnumerationLimits::default()).unwrap();
            let naive = naive_gate_filter(&v, 1 << 20).unwrap();
            assert_eq!(naive.len(), g.order());
            assert!(naive.iter().all(|m| g.contains(m)));
        }
    }

    #[test]
    fn closure_matches_filter() {
        let v = space(2, 2);
        let lim = EnumerationLimits::default();
        let f = enumerate_symplectic(&v, &lim).unwrap();
        let c = enumerate_by_closure(&v, &lim).unwrap();
        assert_eq!(f.order(), 720);
        assert_eq!(c.order(), 720);
        assert_eq!(c.path(), EnumerationPath::Closure);
        let fs: HashSet<&Vec<u8>> = f.packed_elements().iter().collect();
        assert!(c.packed_elements().iter().all(|e| fs.contains(e)));
    }

    #[test]
    fn rationals_and_caps_rejected() {
        let q = PhaseSpace::new(Field::Rationals, 1).unwrap();
        assert!(matches!(
            enumerate_symplectic(&q, &EnumerationLimits::default()),
            Err(Error::NotEnumerable(_))
        ));
        assert!(matches!(
            enumerate_symplectic(&space(2, 3), &EnumerationLimits::default()),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn generators_pass_the_gate() {
        for v in [space(3, 2), PhaseSpace::new(Field::Rationals, 2).unwrap()] {
            for g in transvection_generators(&v, &nonzero_scalars(v.field())) {
                assert!(is_symplectic(&v, &g));
            }
            let mut s = WordSampler::new(&v, 7, 12);
            for _ in 0..5 {
                assert!(is_symplectic(&v, &s.next_matrix()));
            }
        }
    }
}
