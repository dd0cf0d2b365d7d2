use proptest::prelude::*;

use nomic::epistemic::EpistemicState;
use nomic::exactalg::{Field, Matrix, Subspace, Vector};
use nomic::horizon::{enumerate_symplectic, transvection_generators, EnumerationLimits};
use nomic::measurement::{construct_copier, construct_measurement, copies};
use nomic::phasespace::{PhaseSpace, SubspaceClass};
use nomic::transform::{is_symplectic, AffineSymplectic};
use nomic::variable::LinearVariable;

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Prime(2)), Just(Field::Prime(3)), Just(Field::Prime(5)), Just(Field::Rationals)]
}

fn entries() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 16)
}

fn build(f: Field, rows: usize, cols: usize, e: &[i64]) -> Matrix {
    let rs: Vec<Vec<i64>> = e[..rows * cols].chunks(cols).map(|c| c.to_vec()).collect();
    Matrix::from_ints(f, &rs)
}

fn vector(f: Field, len: usize, e: &[i64]) -> Vector {
    Vector::from_ints(f, &e[..len])
}

/// A random product of symplectic transvections on `F^{2n}`.
fn symplectic(space: PhaseSpace) -> impl Strategy<Value = Matrix> {
    let f = space.field();
    let scalars = vec![f.one(), -f.one(), f.from_i64(2)];
    let gens = transvection_generators(&space, &scalars);
    let d = space.dim();
    prop::collection::vec(0..gens.len(), 0..12).prop_map(move |word| {
        word.iter().fold(Matrix::identity(f, d), |m, &g| &gens[g] * &m)
    })
}

fn space_and_map() -> impl Strategy<Value = (PhaseSpace, Matrix)> {
    (field(), 1usize..=2)
        .prop_map(|(f, n)| PhaseSpace::new(f, n).unwrap())
        .prop_flat_map(|s| (Just(s.clone()), symplectic(s)))
}

fn space_and_two_maps() -> impl Strategy<Value = (PhaseSpace, Matrix, Matrix)> {
    (field(), 1usize..=2)
        .prop_map(|(f, n)| PhaseSpace::new(f, n).unwrap())
        .prop_flat_map(|s| (Just(s.clone()), symplectic(s.clone()), symplectic(s)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rref_is_idempotent_and_rank_nullity_holds((f, r, c) in (field(), 1usize..5, 1usize..5), e in entries()) {
        let m = build(f, r, c, &e);
        let rr = m.rref();
        prop_assert_eq!(rr.matrix.rref().matrix, rr.matrix.clone());
        prop_assert_eq!(m.rank() + m.kernel().dim(), c);
        for k in m.kernel().basis_vectors() {
            prop_assert!((&m * &k).is_zero());
        }
    }

    #[test]
    fn solve_returns_a_solution(f in field(), a in (1usize..4, 1usize..4), e in entries(), xe in entries()) {
        let m = build(f, a.0, a.1, &e);
        let x = vector(f, a.1, &xe);
        let b = &m * &x;
        let y = m.solve(&b).unwrap().expect("consistent system");
        prop_assert_eq!(&m * &y, b);
    }

    #[test]
    fn inverse_round_trips((s, m) in space_and_map()) {
        let inv = m.inverse().expect("symplectic matrices are invertible");
        prop_assert_eq!(&m * &inv, Matrix::identity(s.field(), s.dim()));
        prop_assert!(is_symplectic(&s, &m));
        prop_assert!(is_symplectic(&s, &m.transpose()));
    }

    #[test]
    fn subspace_dimension_formula(f in field(), d in 1usize..5, ae in entries(), be in entries()) {
        let a = Subspace::from_rows(build(f, 2, d, &ae));
        let b = Subspace::from_rows(build(f, 2, d, &be));
        let sum = a.sum(&b).unwrap();
        let cap = a.intersection(&b).unwrap();
        prop_assert_eq!(sum.dim() + cap.dim(), a.dim() + b.dim());
        prop_assert!(sum.contains_subspace(&a).unwrap());
        prop_assert!(a.contains_subspace(&cap).unwrap());
    }

    #[test]
    fn symplectic_complement_is_an_involution((s, m) in space_and_map(), k in 0usize..4) {
        let rows: Vec<Vector> = m.row_vectors().into_iter().take(k.min(s.dim())).collect();
        let w = Subspace::span(s.field(), s.dim(), &rows).unwrap();
        let perp = s.symplectic_complement(&w).unwrap();
        prop_assert_eq!(perp.dim() + w.dim(), s.dim());
        prop_assert_eq!(s.symplectic_complement(&perp).unwrap(), w.clone());
        let class = s.classify(&w).unwrap();
        prop_assert_eq!(class == SubspaceClass::Lagrangian, perp == w);
    }

    #[test]
    fn group_laws((s, m, n) in space_and_two_maps(), ue in entries(), ve in entries(), xe in entries()) {
        let u = vector(s.field(), s.dim(), &ue);
        let v = vector(s.field(), s.dim(), &ve);
        let x = vector(s.field(), s.dim(), &xe);
        let f = AffineSymplectic::new(&s, m, u).unwrap();
        let g = AffineSymplectic::new(&s, n, v).unwrap();
        let fg = f.compose(&g).unwrap();
        prop_assert_eq!(fg.apply_vec(&x), f.apply_vec(&g.apply_vec(&x)));
        prop_assert_eq!(f.inverse().apply_vec(&f.apply_vec(&x)), x.clone());
        prop_assert_eq!(f.compose(&f.inverse()).unwrap(), AffineSymplectic::identity(&s));
        prop_assert_eq!(s.form(&(f.matrix() * &x), &(f.matrix() * g.shift())).unwrap(), s.form(&x, g.shift()).unwrap());
    }

    #[test]
    fn isotropy_is_preserved((s, m) in space_and_map(), k in 0usize..3) {
        let lag = Subspace::coordinate_block(s.field(), s.dim(), 0, s.n());
        let w = Subspace::span(s.field(), s.dim(), &lag.basis_vectors().into_iter().take(k).collect::<Vec<_>>()).unwrap();
        let f = AffineSymplectic::linear(&s, m).unwrap();
        let image = w.map(&f.inverse_transpose()).unwrap();
        prop_assert!(s.is_isotropic(&image).unwrap());
        prop_assert_eq!(image.dim(), w.dim());
    }

    #[test]
    fn pushed_states_stay_valid((s, m) in space_and_map(), ae in entries()) {
        let a = vector(s.field(), s.dim(), &ae);
        let known = Subspace::coordinate_block(s.field(), s.dim(), 0, 1);
        let e = EpistemicState::new(&s, known, &a).unwrap();
        let f = AffineSymplectic::linear(&s, m).unwrap();
        let pushed = f.push_epistemic(&e).unwrap();
        prop_assert!(pushed.support().contains(&f.apply_vec(&a)).unwrap());
        prop_assert_eq!(f.inverse().push_epistemic(&pushed).unwrap(), e);
    }

    #[test]
    fn poisson_variables_are_measured_and_copied((s, m) in space_and_map(), k in 0usize..3) {
        // Rows of a Lagrangian basis, moved by a symplectic map, stay Poisson.
        let lag = Subspace::coordinate_block(s.field(), s.dim(), 0, s.n());
        let rows: Vec<Vector> = lag.basis_vectors().into_iter().take(k.min(s.n())).collect();
        let z0 = if rows.is_empty() {
            Matrix::zeros(s.field(), 0, s.dim())
        } else {
            Matrix::from_rows(s.field(), s.dim(), &rows).unwrap()
        };
        let z = LinearVariable::new(&s, &z0 * &m).unwrap();
        prop_assert!(z.is_poisson());
        let meas = construct_measurement(&s, &z).unwrap();
        prop_assert!(meas.measured_variable().equivalent(&z).unwrap());
        prop_assert!(meas.is_fixed(&z).unwrap().is_yes());
        if s.field().is_finite() && s.n() == 1 {
            let c = construct_copier(&s, &z).unwrap();
            prop_assert!(copies(&c.transform, &z, &c.ready).unwrap().is_none());
        }
    }

    #[test]
    fn conjugate_pairs_are_rejected((s, m) in space_and_map()) {
        let rows = Matrix::identity(s.field(), s.dim()).select_rows(&[0, s.n()]);
        let z = LinearVariable::new(&s, &rows * &m).unwrap();
        prop_assert!(!z.is_poisson());
        prop_assert!(construct_measurement(&s, &z).is_err());
    }
}

#[test]
fn every_enumerated_element_is_distinct_and_closed_under_transpose() {
    let s = PhaseSpace::new(Field::Prime(3), 1).unwrap();
    let g = enumerate_symplectic(&s, &EnumerationLimits::default()).unwrap();
    let mut seen = std::collections::HashSet::new();
    for m in g.matrices() {
        assert!(g.contains(&m.transpose()));
        assert!(seen.insert(m));
    }
    assert_eq!(seen.len(), 24);
}
