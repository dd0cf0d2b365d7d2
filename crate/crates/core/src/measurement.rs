//! Toy subjects, measurement interactions and what they reveal.

use std::collections::HashMap;
use std::ops::Range;

use crate::epistemic::EpistemicState;
use crate::error::{Error, Result};
use crate::exactalg::{all_vectors, Field, Matrix, Subspace, Vector};
use crate::phasespace::PhaseSpace;
use crate::transform::AffineSymplectic;
use crate::variable::{GeneralVariable, LinearVariable};

/// Deterministic rule for picking complements of subspaces.
///
/// `Leading` uses the orthogonal complement over ℚ and the standard basis
/// vectors at non-pivot positions over ℤ_p. `Trailing` always uses standard
/// basis vectors, pivoting from the last coordinate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComplementRule {
    #[default]
    Leading,
    Trailing,
}

/// Columns spanning a complement of `w` in its ambient space.
pub fn complement_basis(w: &Subspace, rule: ComplementRule) -> Matrix {
    let field = w.field();
    let d = w.ambient_dim();
    let unit_cols = |coords: &[usize]| {
        let cols: Vec<Vector> = coords.iter().map(|&c| Vector::unit(field, d, c)).collect();
        Matrix::from_columns(field, d, &cols).expect("unit vectors")
    };
    match (rule, field) {
        (ComplementRule::Leading, Field::Rationals) => w.orthogonal_complement().basis().transpose(),
        (ComplementRule::Leading, Field::Prime(_)) => {
            let free: Vec<usize> = (0..d).filter(|c| !w.pivots().contains(c)).collect();
            unit_cols(&free)
        }
        (ComplementRule::Trailing, _) => {
            let rev: Vec<usize> = (0..d).rev().collect();
            let flipped = w.basis().select_cols(&rev).rref();
            let pivots: Vec<usize> = flipped.pivots.iter().map(|&c| d - 1 - c).collect();
            let free: Vec<usize> = (0..d).filter(|c| !pivots.contains(c)).collect();
            unit_cols(&free)
        }
    }
}

/// A toy system with a Lagrangian manifest subspace `Q`.
///
/// The manifest value of `a` is `Z_Q a`, where the rows of `Z_Q` are the
/// canonical basis of `Q`. The momentum subspace is `P = Q^⊥ = ker Z_Q`, so
/// pointer-state supports are exactly the cosets of `P`. The value carrier
/// `R` is a section with `Z_Q R = I` and spans a complement of `P`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ToySubject {
    space: PhaseSpace,
    manifest: Subspace,
    momentum: Subspace,
    carrier: Matrix,
    rule: ComplementRule,
}

impl ToySubject {
    pub fn new(space: &PhaseSpace, q: Subspace) -> Result<Self> {
        ToySubject::with_rule(space, q, ComplementRule::Leading)
    }

    pub fn with_rule(space: &PhaseSpace, q: Subspace, rule: ComplementRule) -> Result<Self> {
        space.check_subspace(&q)?;
        if q.dim() != space.n() {
            return Err(Error::NotLagrangian(format!(
                "dimension {} but the subject has {} degrees of freedom",
                q.dim(),
                space.n()
            )));
        }
        if let Some((i, j, v)) = space.isotropy_witness(&q)? {
            return Err(Error::NotLagrangian(format!("ω(b{i}, b{j}) = {v}")));
        }
        let momentum = q.orthogonal_complement();
        let e = complement_basis(&momentum, rule);
        let carrier = &e * &(q.basis() * &e).inverse().expect("complement of the kernel");
        Ok(ToySubject {
            space: space.clone(),
            manifest: q,
            momentum,
            carrier,
            rule,
        })
    }

    /// `Q = span{q_1..q_n}`.
    pub fn canonical(space: &PhaseSpace) -> Self {
        let q = Subspace::coordinate_block(space.field(), space.dim(), 0, space.n());
        ToySubject::new(space, q).expect("position subspace is Lagrangian")
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn manifest(&self) -> &Subspace {
        &self.manifest
    }

    /// `Z_Q`, one row per manifest component.
    pub fn manifest_functionals(&self) -> &Matrix {
        self.manifest.basis()
    }

    pub fn momentum(&self) -> &Subspace {
        &self.momentum
    }

    pub fn carrier(&self) -> &Matrix {
        &self.carrier
    }

    pub fn rule(&self) -> ComplementRule {
        self.rule
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn manifest_value(&self, a: &Vector) -> Vector {
        self.manifest_functionals() * a
    }

    /// The pointer state `(Q, R·value)` showing `value` on the manifest variable.
    pub fn pointer_state(&self, value: &Vector) -> Result<EpistemicState> {
        if value.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: value.len(),
            });
        }
        let a = self.carrier.checked_mul_vec(value)?;
        EpistemicState::new(&self.space, self.manifest.clone(), &a)
    }

    /// The pointer state whose value point is `point`, which must lie in the
    /// span of the value carrier.
    pub fn pointer_state_at(&self, point: &Vector) -> Result<EpistemicState> {
        let span = Subspace::from_rows(self.carrier.transpose());
        if !span.contains(point)? {
            return Err(Error::ValueOutsideSubspace);
        }
        EpistemicState::new(&self.space, self.manifest.clone(), point)
    }
}

/// A matrix written in an adapted basis, split into named blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockDecomposition {
    parts: Vec<(&'static str, usize)>,
    adapted: Matrix,
    basis: Matrix,
}

impl BlockDecomposition {
    fn range(&self, name: &str) -> Range<usize> {
        let mut start = 0;
        for &(n, len) in &self.parts {
            if n == name {
                return start..start + len;
            }
            start += len;
        }
        panic!("no block named {name}")
    }

    /// Block mapping part `col` into part `row`, e.g. `block("Q", "S")`.
    pub fn block(&self, row: &str, col: &str) -> Matrix {
        let (r, c) = (self.range(row), self.range(col));
        self.adapted.submatrix(r.start, r.end, c.start, c.end)
    }

    pub fn part_dim(&self, name: &str) -> usize {
        self.range(name).len()
    }

    pub fn parts(&self) -> Vec<&'static str> {
        self.parts.iter().map(|p| p.0).collect()
    }

    /// The whole matrix in the adapted basis.
    pub fn adapted(&self) -> &Matrix {
        &self.adapted
    }

    /// Columns of the adapted basis in joint coordinates.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// The original matrix, rebuilt from the blocks.
    pub fn reassemble(&self) -> Matrix {
        let grid: Vec<Vec<Matrix>> = self
            .parts
            .iter()
            .map(|r| self.parts.iter().map(|c| self.block(r.0, c.0)).collect())
            .collect();
        let inv = self.basis.inverse().expect("adapted basis");
        &(&self.basis * &Matrix::from_blocks(&grid)) * &inv
    }
}

/// Split of the manifest value space into free and contingent parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestSplit {
    /// `C = im(M_QP)` in manifest-value coordinates.
    pub contingent: Subspace,
    /// Columns spanning the chosen complement `F`.
    pub free_basis: Matrix,
    /// Projection onto `F` along `C`, in `F`-coordinates.
    pub proj_free: Matrix,
    /// Blocks in the order S, F, C, P.
    pub refined: BlockDecomposition,
}

impl ManifestSplit {
    pub fn free_dim(&self) -> usize {
        self.free_basis.cols()
    }
}

/// `g(q) = L q + b`, reading a fixed variable off the manifest value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extractor {
    pub linear: Matrix,
    pub offset: Vector,
}

impl Extractor {
    pub fn apply(&self, q: &Vector) -> Vector {
        &(&self.linear * q) + &self.offset
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FixedVerdict {
    Yes(Extractor),
    No,
}

impl FixedVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, FixedVerdict::Yes(_))
    }
}

/// Two runs with the same pointer reading but different values of a variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedWitness {
    pub object_a: Vector,
    pub momentum_a: Vector,
    pub object_b: Vector,
    pub momentum_b: Vector,
    pub reading: Vector,
}

/// An interaction between an object `S` and a subject `A` on `S ⊕ A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measurement {
    object: PhaseSpace,
    subject: ToySubject,
    joint: PhaseSpace,
    ready_q: Vector,
    transform: AffineSymplectic,
}

impl Measurement {
    pub fn new(object: &PhaseSpace, subject: ToySubject, ready_q: Vector, transform: AffineSymplectic) -> Result<Self> {
        let joint = object.direct_sum(subject.space())?;
        if transform.space() != &joint {
            return Err(Error::Parse(format!(
                "transform acts on {} but the measurement needs {}",
                transform.space(),
                joint
            )));
        }
        joint.field().check(ready_q.field())?;
        if ready_q.len() != subject.n() {
            return Err(Error::DimensionMismatch {
                expected: subject.n(),
                found: ready_q.len(),
            });
        }
        Ok(Measurement {
            object: object.clone(),
            subject,
            joint,
            ready_q,
            transform,
        })
    }

    /// Measurement with ready value 0 and a linear matrix.
    pub fn linear(object: &PhaseSpace, subject: ToySubject, matrix: Matrix) -> Result<Self> {
        let joint = object.direct_sum(subject.space())?;
        let ready = Vector::zeros(joint.field(), subject.n());
        let t = AffineSymplectic::linear(&joint, matrix)?;
        Measurement::new(object, subject, ready, t)
    }

    pub fn object(&self) -> &PhaseSpace {
        &self.object
    }

    pub fn subject(&self) -> &ToySubject {
        &self.subject
    }

    pub fn joint(&self) -> &PhaseSpace {
        &self.joint
    }

    pub fn ready_q(&self) -> &Vector {
        &self.ready_q
    }

    pub fn transform(&self) -> &AffineSymplectic {
        &self.transform
    }

    fn ds(&self) -> usize {
        self.object.dim()
    }

    fn field(&self) -> Field {
        self.joint.field()
    }

    /// Blocks in the order S, Q, P, using the basis `I_S ⊕ [R | P]`.
    pub fn blocks(&self) -> BlockDecomposition {
        let field = self.field();
        let sub = &self.subject;
        let t = sub.carrier().hstack(&sub.momentum().basis().transpose());
        let basis = Matrix::identity(field, self.ds()).block_diag(&t);
        let adapted = &(&basis.inverse().expect("adapted basis") * self.transform.matrix()) * &basis;
        BlockDecomposition {
            parts: vec![("S", self.ds()), ("Q", sub.n()), ("P", sub.n())],
            adapted,
            basis,
        }
    }

    pub fn manifest_split(&self) -> ManifestSplit {
        let field = self.field();
        let blocks = self.blocks();
        let contingent = blocks.block("Q", "P").image();
        let free_basis = complement_basis(&contingent, self.subject.rule());
        let t2 = free_basis.hstack(&contingent.basis().transpose());
        let t2_inv = t2.inverse().expect("F ⊕ C spans the manifest values");
        let proj_free = t2_inv.submatrix(0, free_basis.cols(), 0, t2.rows());
        let n = self.subject.n();
        let change = Matrix::identity(field, self.ds())
            .block_diag(&t2)
            .block_diag(&Matrix::identity(field, n));
        let change_inv = Matrix::identity(field, self.ds())
            .block_diag(&t2_inv)
            .block_diag(&Matrix::identity(field, n));
        let adapted = &(&change_inv * blocks.adapted()) * &change;
        let refined = BlockDecomposition {
            parts: vec![
                ("S", self.ds()),
                ("F", free_basis.cols()),
                ("C", contingent.dim()),
                ("P", n),
            ],
            adapted,
            basis: blocks.basis() * &change,
        };
        ManifestSplit {
            contingent,
            free_basis,
            proj_free,
            refined,
        }
    }

    /// `M_FS : S → F`.
    pub fn measured_variable(&self) -> LinearVariable {
        let split = self.manifest_split();
        LinearVariable::new(&self.object, split.refined.block("F", "S")).expect("object-shaped")
    }

    /// The manifest value of the subject in a joint state.
    pub fn pointer_reading(&self, joint_state: &Vector) -> Vector {
        let a: Vec<usize> = (self.ds()..self.joint.dim()).collect();
        self.subject.manifest_value(&joint_state.select(&a))
    }

    /// Subject's ready state `(Q, R q_0)`.
    pub fn ready_state(&self) -> EpistemicState {
        self.subject.pointer_state(&self.ready_q).expect("ready value has subject shape")
    }

    fn run(&self, s: &Vector, a: &Vector) -> Vector {
        self.transform.apply_vec(&s.concat(a))
    }

    /// Factorization test: `Z` is fixed iff its rows lie in the row space of
    /// the measured variable. On success the extractor maps the final
    /// manifest value to `Z(s)`.
    pub fn is_fixed(&self, z: &LinearVariable) -> Result<FixedVerdict> {
        if z.space() != &self.object {
            return Err(Error::Parse("variable does not live on the object".into()));
        }
        let split = self.manifest_split();
        let mfs = split.refined.block("F", "S");
        let mfs_t = mfs.transpose();
        let mut rows = Vec::with_capacity(z.value_dim());
        for zi in z.matrix().row_vectors() {
            match mfs_t.solve(&zi)? {
                Some(x) => rows.push(x),
                None => return Ok(FixedVerdict::No),
            }
        }
        let f_hat = Matrix::from_rows(self.field(), mfs.rows(), &rows)?;
        let linear = &f_hat * &split.proj_free;
        let zero_s = Vector::zeros(self.field(), self.ds());
        let a0 = self.subject.carrier() * &self.ready_q;
        let base = self.pointer_reading(&self.run(&zero_s, &a0));
        let offset = -&(&linear * &base);
        Ok(FixedVerdict::Yes(Extractor { linear, offset }))
    }

    /// Enumerates all object states and all ready-state momenta and checks
    /// that the final manifest value determines `key(s)`. Returns a
    /// counterexample if it does not. Finite fields only.
    pub fn fixed_by_definition<K: Eq + std::hash::Hash + Clone>(
        &self,
        key: impl Fn(&Vector) -> K,
    ) -> Result<Option<FixedWitness>> {
        let ready = self.ready_state().support();
        let momenta = self.subject.momentum().elements()?;
        let mut seen: HashMap<Vector, (K, Vector, Vector)> = HashMap::new();
        for s in all_vectors(self.field(), self.ds())? {
            let k = key(&s);
            for p in &momenta {
                let a = ready.point() + p;
                let reading = self.pointer_reading(&self.run(&s, &a));
                match seen.get(&reading) {
                    Some((k0, s0, p0)) if *k0 != k => {
                        return Ok(Some(FixedWitness {
                            object_a: s0.clone(),
                            momentum_a: p0.clone(),
                            object_b: s,
                            momentum_b: p.clone(),
                            reading,
                        }));
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(reading, (k.clone(), s.clone(), p.clone()));
                    }
                }
            }
        }
        Ok(None)
    }

    /// Fixedness of an arbitrary labelling of the object: it must be
    /// constant on cosets of `ker M_FS`. Finite fields only.
    pub fn is_fixed_general(&self, z: &GeneralVariable) -> Result<bool> {
        let kernel = self.measured_variable().kernel();
        for s in all_vectors(self.field(), self.ds())? {
            let rep = kernel.coset_canonical_rep(&s)?;
            if z.label(&s) != z.label(&rep) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `M_QP = 0` and `M_PP` invertible.
    pub fn is_pointer_preserving(&self) -> bool {
        let b = self.blocks();
        b.block("Q", "P").is_zero() && b.block("P", "P").is_invertible()
    }

    /// For every object state and every pointer state of the subject, the
    /// subject's part of the output support is again a pointer-state
    /// support. Finite fields only.
    pub fn is_pointer_preserving_by_definition(&self) -> Result<bool> {
        let field = self.field();
        let momenta = self.subject.momentum().elements()?;
        let a_coords: Vec<usize> = (self.ds()..self.joint.dim()).collect();
        for s in all_vectors(field, self.ds())? {
            for q in all_vectors(field, self.subject.n())? {
                let a0 = self.subject.carrier() * &q;
                let mut image: Vec<Vector> = momenta
                    .iter()
                    .map(|p| self.run(&s, &(&a0 + p)).select(&a_coords))
                    .collect();
                image.sort_by_key(|v| v.index());
                image.dedup();
                if image.len() != momenta.len() {
                    return Ok(false);
                }
                let base = &image[0];
                for x in &image {
                    if !self.subject.momentum().contains(&(x - base))? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Builds the measurement `[[I, 0, Ω_S Zᵀ], [Z, I, 0], [0, 0, I]]` on
/// `S ⊕ A`, where `A` has one degree of freedom per row of `Z` (at least one)
/// and manifest subspace `span{q_i}`.
pub fn construct_measurement(object: &PhaseSpace, z: &LinearVariable) -> Result<Measurement> {
    if z.space() != object {
        return Err(Error::Parse("variable does not live on the object".into()));
    }
    z.require_poisson()?;
    let field = object.field();
    let zm = if z.value_dim() == 0 {
        Matrix::zeros(field, 1, object.dim())
    } else {
        z.matrix().clone()
    };
    let k = zm.rows();
    let ds = object.dim();
    let subject_space = PhaseSpace::new(field, k)?.named("A");
    let subject = ToySubject::canonical(&subject_space);
    let m = Matrix::from_blocks(&[
        vec![
            Matrix::identity(field, ds),
            Matrix::zeros(field, ds, k),
            object.omega() * &zm.transpose(),
        ],
        vec![zm, Matrix::identity(field, k), Matrix::zeros(field, k, k)],
        vec![
            Matrix::zeros(field, k, ds),
            Matrix::zeros(field, k, k),
            Matrix::identity(field, k),
        ],
    ]);
    Measurement::linear(object, subject, m)
}

/// A copying interaction on `V ⊕ V'` and the ready state of `V'` it expects.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Copier {
    pub transform: AffineSymplectic,
    pub ready: EpistemicState,
}

/// Counterexample to copying: input `v ⊕ x` whose output values differ from `Z(v) ⊕ Z(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyWitness {
    pub input: Vector,
    pub ready: Vector,
    pub expected: Vector,
    pub found: Vector,
}

/// The doubled space `V ⊕ V'` used by copiers.
pub fn copy_space(space: &PhaseSpace) -> Result<PhaseSpace> {
    let copy = space.clone().named(format!("{}'", space.name()));
    space.direct_sum(&copy)
}

/// Builds `[[I, X], [YZ, I]]` with `ZY = I`, `YᵀΩY = 0` and `X = ΩZᵀYᵀΩ`.
/// The second copy starts in `(row space of Z, 0)`.
pub fn construct_copier(space: &PhaseSpace, z: &LinearVariable) -> Result<Copier> {
    if z.space() != space {
        return Err(Error::Parse("variable lives on a different space".into()));
    }
    z.require_poisson()?;
    let field = space.field();
    let d = space.dim();
    let omega = space.omega();
    let rows = z.row_space().basis_vectors();
    let r = rows.len();

    let mut ws: Vec<Vector> = Vec::with_capacity(r);
    for j in 0..r {
        let mut constraints: Vec<Vector> = rows.iter().map(|di| omega.transpose().mul_vec(di)).collect();
        constraints.extend(ws.iter().map(|w| omega.transpose().mul_vec(w)));
        let lhs = Matrix::from_rows(field, d, &constraints)?;
        let mut rhs = Vector::zeros(field, lhs.rows());
        rhs.set(j, -field.one());
        let w = lhs
            .solve(&rhs)?
            .ok_or_else(|| Error::NotPoisson {
                i: j,
                j,
                value: "no isotropic section".into(),
            })?;
        ws.push(w);
    }
    let w = Matrix::from_columns(field, d, &ws)?;
    let y = -&(omega * &w);
    let zb = z.row_space().basis().clone();
    let x = &(&(omega * &zb.transpose()) * &y.transpose()) * omega;
    let yz = &y * &zb;
    let m = Matrix::from_blocks(&[
        vec![Matrix::identity(field, d), x],
        vec![yz, Matrix::identity(field, d)],
    ]);
    let joint = copy_space(space)?;
    let transform = AffineSymplectic::linear(&joint, m)?;
    let half = &joint.factors()[space.factors().len()..];
    let copy = if half.len() == 1 {
        joint.factor_space(&half[0])
    } else {
        PhaseSpace::compose(&half.iter().map(|f| joint.factor_space(f)).collect::<Vec<_>>())?
    };
    let ready = EpistemicState::new(&copy, Subspace::from_rows(zb), &Vector::zeros(field, d))?;
    Ok(Copier { transform, ready })
}

/// Checks `(Z ⊕ Z)(f(v ⊕ x)) = Z(v) ⊕ Z(v)` for every `v` and every `x` in
/// the ready support. Finite fields only.
pub fn copies(f: &AffineSymplectic, z: &LinearVariable, ready: &EpistemicState) -> Result<Option<CopyWitness>> {
    let space = z.space();
    let d = space.dim();
    let xs = ready.support().elements()?;
    let first: Vec<usize> = (0..d).collect();
    let second: Vec<usize> = (d..2 * d).collect();
    for v in all_vectors(space.field(), d)? {
        let zv = z.eval(&v);
        let expected = zv.concat(&zv);
        for x in &xs {
            let out = f.apply_vec(&v.concat(x));
            let found = z.eval(&out.select(&first)).concat(&z.eval(&out.select(&second)));
            if found != expected {
                return Ok(Some(CopyWitness {
                    input: v,
                    ready: x.clone(),
                    expected,
                    found,
                }));
            }
        }
    }
    Ok(None)
}
