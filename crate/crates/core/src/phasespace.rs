//! Symplectic phase spaces and composite systems.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactalg::{subspaces_of_dim, Field, Matrix, Scalar, Subspace, Vector};

/// An atomic subsystem inside a (possibly composite) phase space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Factor {
    pub name: String,
    /// First coordinate of this factor in the joint basis.
    pub offset: usize,
    /// Degrees of freedom.
    pub n: usize,
}

impl Factor {
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.dim()
    }
}

#[derive(Debug, PartialEq, Eq, Hash)]
struct Inner {
    field: Field,
    n: usize,
    omega: Matrix,
    labels: Vec<String>,
    factors: Vec<Factor>,
}

/// A symplectic vector space `F^{2n}` with an explicit Gram matrix Ω.
///
/// Each factor keeps its own `(q_1..q_k, p_1..p_k)` block contiguous, so a
/// composite Ω is block diagonal rather than the global canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhaseSpace(Arc<Inner>);

/// Classification of a subspace relative to ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SubspaceClass {
    Symplectic,
    Isotropic,
    Lagrangian,
    Neither,
}

impl fmt::Display for SubspaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SubspaceClass::Symplectic => "symplectic",
            SubspaceClass::Isotropic => "isotropic",
            SubspaceClass::Lagrangian => "lagrangian",
            SubspaceClass::Neither => "neither",
        };
        f.write_str(s)
    }
}

/// `[[0, I_n], [−I_n, 0]]`.
pub fn canonical_omega(field: Field, n: usize) -> Matrix {
    let mut m = Matrix::zeros(field, 2 * n, 2 * n);
    for i in 0..n {
        m.set(i, n + i, field.one());
        m.set(n + i, i, -field.one());
    }
    m
}

fn atomic_labels(n: usize, prefix: &str) -> Vec<String> {
    (1..=n)
        .map(|i| format!("{prefix}q_{i}"))
        .chain((1..=n).map(|i| format!("{prefix}p_{i}")))
        .collect()
}

impl PhaseSpace {
    /// The atomic space of `n` degrees of freedom, named `V`.
    pub fn new(field: Field, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyPhaseSpace);
        }
        Ok(PhaseSpace(Arc::new(Inner {
            field,
            n,
            omega: canonical_omega(field, n),
            labels: atomic_labels(n, ""),
            factors: vec![Factor {
                name: "V".into(),
                offset: 0,
                n,
            }],
        })))
    }

    /// Renames an atomic space. Composites keep their factor names.
    pub fn named(self, name: impl Into<String>) -> Self {
        if !self.is_atomic() {
            return self;
        }
        let mut inner = Inner {
            field: self.0.field,
            n: self.0.n,
            omega: self.0.omega.clone(),
            labels: self.0.labels.clone(),
            factors: self.0.factors.clone(),
        };
        inner.factors[0].name = name.into();
        PhaseSpace(Arc::new(inner))
    }

    /// `self ⊕ other`, flattening factors in order.
    pub fn direct_sum(&self, other: &PhaseSpace) -> Result<PhaseSpace> {
        PhaseSpace::compose(&[self.clone(), other.clone()])
    }

    pub fn compose(parts: &[PhaseSpace]) -> Result<PhaseSpace> {
        let first = parts.first().ok_or(Error::EmptyPhaseSpace)?;
        let field = first.field();
        let mut factors = Vec::new();
        let mut omega: Option<Matrix> = None;
        let mut offset = 0;
        for p in parts {
            field.check(p.field())?;
            for f in p.factors() {
                factors.push(Factor {
                    name: f.name.clone(),
                    offset: offset + f.offset,
                    n: f.n,
                });
            }
            offset += p.dim();
            omega = Some(match omega {
                None => p.omega().clone(),
                Some(o) => o.block_diag(p.omega()),
            });
        }
        let labels = factors
            .iter()
            .flat_map(|f| atomic_labels(f.n, &format!("{}.", f.name)))
            .collect();
        Ok(PhaseSpace(Arc::new(Inner {
            field,
            n: offset / 2,
            omega: omega.expect("at least one part"),
            labels,
            factors,
        })))
    }

    pub fn field(&self) -> Field {
        self.0.field
    }

    /// Degrees of freedom.
    pub fn n(&self) -> usize {
        self.0.n
    }

    /// Vector-space dimension `2n`.
    pub fn dim(&self) -> usize {
        2 * self.0.n
    }

    pub fn omega(&self) -> &Matrix {
        &self.0.omega
    }

    pub fn labels(&self) -> &[String] {
        &self.0.labels
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0.factors
    }

    pub fn is_atomic(&self) -> bool {
        self.0.factors.len() == 1
    }

    pub fn name(&self) -> String {
        self.0
            .factors
            .iter()
            .map(|f| f.name.as_str())
            .collect::<Vec<_>>()
            .join("⊕")
    }

    /// Looks up a factor by name or by 1-based position.
    pub fn factor(&self, key: &str) -> Result<&Factor> {
        let by_name: Vec<&Factor> = self.0.factors.iter().filter(|f| f.name == key).collect();
        match by_name.len() {
            1 => return Ok(by_name[0]),
            0 => {}
            _ => return Err(Error::AmbiguousFactor(key.to_string())),
        }
        key.parse::<usize>()
            .ok()
            .filter(|&i| i >= 1)
            .and_then(|i| self.0.factors.get(i - 1))
            .ok_or_else(|| Error::UnknownFactor(key.to_string()))
    }

    /// The atomic space of a factor, carrying its name.
    pub fn factor_space(&self, f: &Factor) -> PhaseSpace {
        PhaseSpace::new(self.field(), f.n)
            .expect("factors are nonempty")
            .named(f.name.clone())
    }

    /// The coordinate subspace `V_f` occupied by a factor.
    pub fn factor_subspace(&self, f: &Factor) -> Subspace {
        Subspace::coordinate_block(self.field(), self.dim(), f.offset, f.dim())
    }

    /// Embeds a factor-local vector into the joint coordinates.
    pub fn embed(&self, f: &Factor, x: &Vector) -> Result<Vector> {
        self.check_len(f.dim(), x.len())?;
        let mut out = Vector::zeros(self.field(), self.dim());
        for (i, e) in x.entries().iter().enumerate() {
            out.set(f.offset + i, e.clone());
        }
        Ok(out)
    }

    /// Coordinate projection onto a factor.
    pub fn project(&self, f: &Factor, x: &Vector) -> Result<Vector> {
        self.check_len(self.dim(), x.len())?;
        Ok(x.select(&f.range().collect::<Vec<_>>()))
    }

    fn check_len(&self, expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found })
        }
    }

    pub(crate) fn check_subspace(&self, w: &Subspace) -> Result<()> {
        self.field().check(w.field())?;
        self.check_len(self.dim(), w.ambient_dim())
    }

    pub(crate) fn check_vector(&self, x: &Vector) -> Result<()> {
        self.field().check(x.field())?;
        self.check_len(self.dim(), x.len())
    }

    /// `xᵀ Ω y`.
    pub fn form(&self, x: &Vector, y: &Vector) -> Result<Scalar> {
        self.check_vector(x)?;
        self.check_vector(y)?;
        Ok(x.dot(&self.omega().mul_vec(y)))
    }

    pub fn symplectic_form(&self, x: &OnticState, y: &OnticState) -> Result<Scalar> {
        if x.space() != self || y.space() != self {
            return Err(Error::Parse("ontic state from a different phase space".into()));
        }
        self.form(x.coords(), y.coords())
    }

    /// `W^ω = {v : ω(w, v) = 0 for all w ∈ W}`.
    pub fn symplectic_complement(&self, w: &Subspace) -> Result<Subspace> {
        self.check_subspace(w)?;
        Ok((w.basis() * self.omega()).kernel())
    }

    /// First basis pair of `W` with nonzero ω, if any.
    pub fn isotropy_witness(&self, w: &Subspace) -> Result<Option<(usize, usize, Scalar)>> {
        self.check_subspace(w)?;
        let gram = &(w.basis() * self.omega()) * &w.basis().transpose();
        for i in 0..gram.rows() {
            for j in i + 1..gram.cols() {
                if !gram.get(i, j).is_zero() {
                    return Ok(Some((i, j, gram.get(i, j).clone())));
                }
            }
        }
        Ok(None)
    }

    pub fn is_isotropic(&self, w: &Subspace) -> Result<bool> {
        Ok(self.isotropy_witness(w)?.is_none())
    }

    pub fn is_lagrangian(&self, w: &Subspace) -> Result<bool> {
        Ok(w.dim() == self.n() && self.is_isotropic(w)?)
    }

    /// Isotropic subspaces of dimension `n` are reported as Lagrangian, other
    /// isotropic ones (including `{0}`) as Isotropic.
    pub fn classify(&self, w: &Subspace) -> Result<SubspaceClass> {
        let comp = self.symplectic_complement(w)?;
        if comp.contains_subspace(w)? {
            return Ok(if comp == *w {
                SubspaceClass::Lagrangian
            } else {
                SubspaceClass::Isotropic
            });
        }
        if w.intersection(&comp)?.is_zero() {
            Ok(SubspaceClass::Symplectic)
        } else {
            Ok(SubspaceClass::Neither)
        }
    }

    /// All isotropic subspaces; finite fields only.
    pub fn isotropic_subspaces(&self) -> Result<Vec<Subspace>> {
        let mut out = Vec::new();
        for k in 0..=self.n() {
            for w in subspaces_of_dim(self.field(), self.dim(), k)? {
                if self.is_isotropic(&w)? {
                    out.push(w);
                }
            }
        }
        Ok(out)
    }

    /// All Lagrangian subspaces; finite fields only.
    pub fn lagrangians(&self) -> Result<Vec<Subspace>> {
        let mut out = Vec::new();
        for w in subspaces_of_dim(self.field(), self.dim(), self.n())? {
            if self.is_isotropic(&w)? {
                out.push(w);
            }
        }
        Ok(out)
    }

    /// A basis `e_1..e_k, f_1..f_k` of a symplectic subspace with
    /// `ω(e_i, f_j) = δ_ij` and all other pairings zero.
    pub fn darboux_basis(&self, w: &Subspace) -> Result<(Vec<Vector>, Vec<Vector>)> {
        self.check_subspace(w)?;
        let mut rest: Vec<Vector> = w.basis_vectors();
        let (mut es, mut fs) = (Vec::new(), Vec::new());
        while !rest.is_empty() {
            let e = rest.remove(0);
            let Some(pos) = rest
                .iter()
                .position(|v| !self.form(&e, v).expect("same space").is_zero())
            else {
                return Err(Error::NotPhysical("kernel is not a symplectic subspace".into()));
            };
            let raw = rest.remove(pos);
            let f = raw.scale(&self.form(&e, &raw)?.inv().expect("nonzero"));
            rest = rest
                .into_iter()
                .map(|v| {
                    let a = self.form(&f, &v).expect("same space");
                    let b = self.form(&e, &v).expect("same space");
                    &(&v + &e.scale(&a)) - &f.scale(&b)
                })
                .filter(|v| !v.is_zero())
                .collect();
            es.push(e);
            fs.push(f);
        }
        Ok((es, fs))
    }

    pub fn zero_state(&self) -> OnticState {
        OnticState {
            space: self.clone(),
            coords: Vector::zeros(self.field(), self.dim()),
        }
    }
}

impl fmt::Display for PhaseSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}, n={}]", self.name(), self.field(), self.n())
    }
}

/// A point of phase space.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OnticState {
    space: PhaseSpace,
    coords: Vector,
}

impl OnticState {
    pub fn new(space: &PhaseSpace, coords: Vector) -> Result<Self> {
        space.check_vector(&coords)?;
        Ok(OnticState {
            space: space.clone(),
            coords,
        })
    }

    pub fn from_ints(space: &PhaseSpace, values: &[i64]) -> Result<Self> {
        OnticState::new(space, Vector::from_ints(space.field(), values))
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.space
    }

    pub fn coords(&self) -> &Vector {
        &self.coords
    }

    pub fn into_coords(self) -> Vector {
        self.coords
    }
}

impl fmt::Display for OnticState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.coords.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::all_subspaces;

    const Z2: Field = Field::Prime(2);
    const Z3: Field = Field::Prime(3);
    const Q: Field = Field::Rationals;

    #[test]
    fn omega_forms() {
        let v = PhaseSpace::new(Q, 1).unwrap();
        assert_eq!(v.omega(), &Matrix::from_ints(Q, &[[0, 1], [-1, 0]]));
        let v = PhaseSpace::new(Z2, 1).unwrap();
        assert_eq!(v.omega(), &Matrix::from_ints(Z2, &[[0, 1], [1, 0]]));
        let v = PhaseSpace::new(Z3, 2).unwrap();
        assert_eq!(v.omega().get(2, 0).residue(), Some(2));
        assert_eq!(v.omega().get(3, 1).residue(), Some(2));
        assert_eq!(PhaseSpace::new(Q, 0), Err(Error::EmptyPhaseSpace));
    }

    #[test]
    fn form_examples() {
        let v = PhaseSpace::new(Q, 1).unwrap();
        let q = OnticState::from_ints(&v, &[1, 0]).unwrap();
        let p = OnticState::from_ints(&v, &[0, 1]).unwrap();
        assert!(v.symplectic_form(&q, &p).unwrap().is_one());
        assert!(v.symplectic_form(&q, &q).unwrap().is_zero());
        let v2 = PhaseSpace::new(Q, 2).unwrap();
        let q1 = Vector::from_ints(Q, &[1, 0, 0, 0]);
        let q2 = Vector::from_ints(Q, &[0, 1, 0, 0]);
        assert!(v2.form(&q1, &q2).unwrap().is_zero());
    }

    #[test]
    fn complement_examples() {
        let v = PhaseSpace::new(Z2, 1).unwrap();
        assert!(v.symplectic_complement(&Subspace::zero(Z2, 2)).unwrap().is_full());
        assert!(v.symplectic_complement(&Subspace::full(Z2, 2)).unwrap().is_zero());
        let q = Subspace::coordinate_block(Z2, 2, 0, 1);
        assert_eq!(v.symplectic_complement(&q).unwrap(), q);
    }

    #[test]
    fn classify_examples() {
        let v = PhaseSpace::new(Q, 2).unwrap();
        let qs = Subspace::coordinate_block(Q, 4, 0, 2);
        assert_eq!(v.classify(&qs).unwrap(), SubspaceClass::Lagrangian);
        let qp = Subspace::span(Q, 4, &[Vector::from_ints(Q, &[1, 0, 0, 0]), Vector::from_ints(Q, &[0, 0, 1, 0])]).unwrap();
        assert_eq!(v.classify(&qp).unwrap(), SubspaceClass::Symplectic);
        assert_eq!(v.classify(&Subspace::zero(Q, 4)).unwrap(), SubspaceClass::Isotropic);
        let odd = Subspace::span(Q, 4, &[
            Vector::from_ints(Q, &[1, 0, 0, 0]),
            Vector::from_ints(Q, &[0, 1, 0, 0]),
            Vector::from_ints(Q, &[0, 0, 1, 0]),
        ])
        .unwrap();
        assert_eq!(v.classify(&odd).unwrap(), SubspaceClass::Neither);
    }

    #[test]
    fn composite_layout() {
        let s = PhaseSpace::new(Z2, 1).unwrap().named("S");
        let a = PhaseSpace::new(Z2, 1).unwrap().named("A");
        let j = s.direct_sum(&a).unwrap();
        assert_eq!(j.dim(), 4);
        assert_eq!(j.omega(), &s.omega().block_diag(a.omega()));
        assert_eq!(j.labels(), &["S.q_1", "S.p_1", "A.q_1", "A.p_1"]);
        let fa = j.factor("A").unwrap().clone();
        assert_eq!(fa.offset, 2);
        assert_eq!(j.factor("2").unwrap(), &fa);
        assert!(matches!(j.factor("B"), Err(Error::UnknownFactor(_))));
        let x = Vector::from_ints(Z2, &[1, 1]);
        assert_eq!(j.project(&fa, &j.embed(&fa, &x).unwrap()).unwrap(), x);
        let twin = PhaseSpace::new(Z2, 1).unwrap().direct_sum(&PhaseSpace::new(Z2, 1).unwrap()).unwrap();
        assert!(matches!(twin.factor("V"), Err(Error::AmbiguousFactor(_))));
        assert!(s.direct_sum(&PhaseSpace::new(Q, 1).unwrap()).is_err());
    }

    #[test]
    fn three_lagrangian_lines_on_a_toy_bit() {
        let v = PhaseSpace::new(Z2, 1).unwrap();
        assert_eq!(v.lagrangians().unwrap().len(), 3);
        let v3 = PhaseSpace::new(Z3, 1).unwrap();
        assert_eq!(v3.lagrangians().unwrap().len(), 4);
    }

    #[test]
    fn double_complement_exhaustive_z2() {
        for n in 1..=2 {
            let v = PhaseSpace::new(Z2, n).unwrap();
            for w in all_subspaces(Z2, 2 * n).unwrap() {
                let c = v.symplectic_complement(&w).unwrap();
                assert_eq!(w.dim() + c.dim(), 2 * n);
                assert_eq!(v.symplectic_complement(&c).unwrap(), w);
                if v.classify(&w).unwrap() == SubspaceClass::Lagrangian {
                    assert_eq!(w.dim(), n);
                }
            }
        }
    }

    #[test]
    fn darboux_basis_of_full_space() {
        let v = PhaseSpace::new(Z3, 2).unwrap();
        let (es, fs) = v.darboux_basis(&Subspace::full(Z3, 4)).unwrap();
        assert_eq!(es.len(), 2);
        for (i, e) in es.iter().enumerate() {
            for (j, f) in fs.iter().enumerate() {
                let w = v.form(e, f).unwrap();
                assert_eq!(w.is_one(), i == j);
                assert_eq!(w.is_zero(), i != j);
                assert!(v.form(e, &es[j]).unwrap().is_zero());
                assert!(v.form(f, &fs[i]).unwrap().is_zero());
            }
        }
    }
}
