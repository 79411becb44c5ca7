//! Randomized invariants across the arithmetic, residue, fiber and evaluation layers.

use num_traits::{Signed, Zero};
use proptest::prelude::*;

use brauer_core::brauer::{
    adelic_pairing, build_class_a, global_invariant_sum, is_local_point, rationals_up_to, sample_vanishing,
    AdelicPointSpec, SurfacePoint,
};
use brauer_core::descent::transcendence_test;
use brauer_core::elliptic::{classify_surface, minimalize_at, SplitCurve};
use brauer_core::exactalg::{
    int, poly_factor, poly_gcd, rat, rat_is_square, Polynomial, Rational, RationalFunction,
};
use brauer_core::funcfield::{places_of_support, unit_part, valuation, Place};
use brauer_core::hilbert::{hilbert_symbol, RationalPlace, SymbolValue};
use brauer_core::pencil;
use brauer_core::residues::{tame_symbol, ResidueValue};
use brauer_core::squareclass::{
    class_of, class_of_rational, in_span, DescentPair, FieldMode, SquareClassVector,
};

fn poly(max_deg: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(-5i64..=5, 1..=max_deg + 1)
        .prop_map(|c| Polynomial::from_i64s(&c))
        .prop_filter("nonzero", |p| !p.is_zero())
}

fn nonzero_rational() -> impl Strategy<Value = Rational> {
    (-60i64..=60, 1i64..=30)
        .prop_filter("nonzero", |(n, _)| *n != 0)
        .prop_map(|(n, d)| rat(n, d))
}

fn ratfunc() -> impl Strategy<Value = RationalFunction> {
    (poly(3), poly(2)).prop_map(|(n, d)| &RationalFunction::from(n) / &RationalFunction::from(d))
}

fn places() -> Vec<RationalPlace> {
    let mut v = vec![RationalPlace::Real];
    v.extend([2u64, 3, 5, 7, 11, 13].map(RationalPlace::Prime));
    v
}

/// Residue value as a class in `Q*/Q*²`, with the trivial verdict as zero.
fn as_class(v: &ResidueValue) -> SquareClassVector {
    match v {
        ResidueValue::TriviallyOne => SquareClassVector::zero(FieldMode::RationalsOnly),
        ResidueValue::Class(c) => c.clone(),
        ResidueValue::Undetermined => panic!("undetermined at a rational place"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn factorization_reassembles(f in poly(8)) {
        let fac = poly_factor(&f).unwrap();
        prop_assert_eq!(fac.expand(), f);
        for (g, e) in &fac.factors {
            prop_assert!(g.is_monic() && *e >= 1 && g.degree().unwrap() >= 1);
        }
    }

    #[test]
    fn factorization_of_products(a in poly(3), b in poly(3), c in poly(2)) {
        let f = &(&a * &b) * &(&c * &c);
        let fac = poly_factor(&f).unwrap();
        prop_assert_eq!(fac.expand(), f.clone());
        // every factor of a divides f to at least its multiplicity in a
        for (g, e) in poly_factor(&a).unwrap().factors {
            let m = fac.factors.iter().find(|(h, _)| *h == g).map(|(_, m)| *m);
            prop_assert!(m.is_some_and(|m| m >= e));
        }
    }

    #[test]
    fn gcd_divides_both(f in poly(5), g in poly(5), h in poly(2)) {
        let (f, g) = (&f * &h, &g * &h);
        let d = poly_gcd(&f, &g).unwrap();
        prop_assert!(f.div_rem(&d).1.is_zero());
        prop_assert!(g.div_rem(&d).1.is_zero());
        prop_assert!(h.div_rem(&d).1.is_zero() || d.degree() >= h.degree());
    }

    #[test]
    fn squares_of_rationals(a in nonzero_rational()) {
        let sq = &a * &a;
        prop_assert!(rat_is_square(&sq).unwrap());
        prop_assert!(!rat_is_square(&-sq).unwrap());
    }

    #[test]
    fn ring_identities(f in poly(4), g in poly(4), h in poly(4)) {
        prop_assert_eq!(&(&f + &g) * &h, &(&f * &h) + &(&g * &h));
        prop_assert_eq!((&f * &g).degree().unwrap(), f.degree().unwrap() + g.degree().unwrap());
        let (q, r) = (&f * &g).div_rem(&g);
        prop_assert_eq!(q, f);
        prop_assert!(r.is_zero());
    }

    #[test]
    fn zeros_balance_poles(f in ratfunc()) {
        let support = places_of_support(std::slice::from_ref(&f)).unwrap();
        let total: i64 = support
            .iter()
            .map(|v| valuation(v, &f).unwrap() * v.degree() as i64)
            .sum();
        prop_assert_eq!(total, 0);
    }

    #[test]
    fn unit_part_is_multiplicative(f in ratfunc(), g in ratfunc(), a in -3i64..=3) {
        for v in [Place::at(&int(a)), Place::Infinity] {
            let (uf, ug) = (unit_part(&v, &f).unwrap(), unit_part(&v, &g).unwrap());
            let ufg = unit_part(&v, &(&f * &g)).unwrap();
            prop_assert_eq!(ufg.valuation, uf.valuation + ug.valuation);
            prop_assert_eq!(ufg.residue.unwrap(), uf.residue.unwrap() * ug.residue.unwrap());
        }
    }

    #[test]
    fn valuation_sign_matches_divisibility(f in ratfunc(), a in -3i64..=3) {
        let v = Place::at(&int(a));
        let pi = Polynomial::linear(&int(a));
        let val = valuation(&v, &f).unwrap();
        prop_assert_eq!(val >= 1, f.numerator().exact_div(&pi).is_some());
        prop_assert_eq!(val <= -1, f.denominator().exact_div(&pi).is_some());
    }

    #[test]
    fn class_of_is_a_homomorphism(f in ratfunc(), g in ratfunc()) {
        for mode in [FieldMode::RationalConstants, FieldMode::ConstantsAreSquares] {
            let lhs = class_of(&(&f * &g), mode).unwrap();
            let rhs = class_of(&f, mode).unwrap().add(&class_of(&g, mode).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn modes_are_coherent(f in ratfunc()) {
        prop_assert_eq!(
            class_of(&f, FieldMode::RationalConstants).unwrap().forget_constants(),
            class_of(&f, FieldMode::ConstantsAreSquares).unwrap()
        );
    }

    #[test]
    fn span_matches_enumeration(
        gens in prop::collection::vec((1i64..=40, 1i64..=40), 1..=8),
        target in (1i64..=40, 1i64..=40),
    ) {
        let pair = |(a, b): (i64, i64)| {
            DescentPair::new(class_of_rational(&int(a)).unwrap(), class_of_rational(&int(b)).unwrap()).unwrap()
        };
        let generators: Vec<DescentPair> = gens.iter().copied().map(pair).collect();
        let target = pair(target);
        let cert = in_span(&target, &generators).unwrap();
        let k = generators.len();
        let brute = (0u32..1 << k).any(|mask| {
            let mut acc = DescentPair::zero(FieldMode::RationalsOnly);
            for (i, g) in generators.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc = acc.add(g).unwrap();
                }
            }
            acc == target
        });
        prop_assert_eq!(cert.in_span, brute);
        if let Some(bits) = cert.combination {
            let mut acc = DescentPair::zero(FieldMode::RationalsOnly);
            for (g, b) in generators.iter().zip(bits) {
                if b {
                    acc = acc.add(g).unwrap();
                }
            }
            prop_assert_eq!(acc, target);
        }
    }

    #[test]
    fn hilbert_symbol_identities(a in nonzero_rational(), b in nonzero_rational(), c in nonzero_rational(), s in nonzero_rational()) {
        for v in places() {
            let h = |x: &Rational, y: &Rational| hilbert_symbol(x, y, v).unwrap();
            prop_assert_eq!(h(&a, &(&b * &c)), h(&a, &b) + h(&a, &c));
            prop_assert_eq!(h(&a, &b), h(&b, &a));
            prop_assert_eq!(h(&(&a * &s * &s), &b), h(&a, &b));
            prop_assert_eq!(h(&a, &-a.clone()), SymbolValue::Plus);
            let one_minus = Rational::from_integer(1.into()) - &a;
            if !one_minus.is_zero() {
                prop_assert_eq!(h(&a, &one_minus), SymbolValue::Plus);
            }
        }
    }

    #[test]
    fn tame_symbol_is_bimultiplicative(f1 in ratfunc(), f2 in ratfunc(), g in ratfunc(), a in -3i64..=3) {
        for v in [Place::at(&int(a)), Place::Infinity] {
            let d = |x: &RationalFunction, y: &RationalFunction| as_class(&tame_symbol(&v, x, y).unwrap().value);
            prop_assert_eq!(d(&(&f1 * &f2), &g), d(&f1, &g).add(&d(&f2, &g)).unwrap());
            // swapping the entries inverts the symbol, which is itself mod squares
            prop_assert_eq!(d(&f1, &g), d(&g, &f1));
        }
    }

    #[test]
    fn tame_symbol_sign_factor(f in ratfunc(), g in ratfunc(), a in -3i64..=3) {
        let v = Place::at(&int(a));
        let (uf, ug) = (unit_part(&v, &f).unwrap(), unit_part(&v, &g).unwrap());
        let (va, vb) = (uf.valuation, ug.valuation);
        let mut expected = Rational::from_integer(1.into());
        if va * vb % 2 != 0 {
            expected = -expected;
        }
        if vb % 2 != 0 {
            expected *= uf.residue.unwrap();
        }
        if va % 2 != 0 {
            expected *= ug.residue.unwrap();
        }
        let got = as_class(&tame_symbol(&v, &f, &g).unwrap().value);
        prop_assert_eq!(got, class_of_rational(&expected).unwrap());
    }

    #[test]
    fn tame_symbol_depends_on_square_class_of_residue(
        f in ratfunc(), g in ratfunc(), c in nonzero_rational(), k in poly(2), a in -3i64..=3,
    ) {
        // u = c² + (t − a)·k is a unit at t = a with square residue c²
        let pi = Polynomial::linear(&int(a));
        let u = RationalFunction::from(&Polynomial::constant(&c * &c) + &(&pi * &k));
        let v = Place::at(&int(a));
        let d = |x: &RationalFunction| as_class(&tame_symbol(&v, x, &g).unwrap().value);
        prop_assert_eq!(d(&(&f * &u)), d(&f));
    }

    #[test]
    fn double_rule(h in ratfunc(), c in nonzero_rational(), g in ratfunc(), a in -3i64..=3) {
        // f = c²·h² has even valuation and square residue everywhere
        let f = &(&h * &h) * &RationalFunction::constant(&c * &c);
        let v = Place::at(&int(a));
        prop_assert_eq!(tame_symbol(&v, &f, &g).unwrap().value, ResidueValue::TriviallyOne);
    }

    #[test]
    fn transcendence_ignores_constant_factors(c in nonzero_rational(), d in nonzero_rational()) {
        let curve = pencil::curve();
        let f = &pencil::f_arg() * &RationalFunction::constant(c);
        let g = &pencil::g_arg() * &RationalFunction::constant(d);
        let base = transcendence_test(&pencil::f_arg(), &pencil::g_arg(), &curve, 0).unwrap();
        let scaled = transcendence_test(&f, &g, &curve, 0).unwrap();
        prop_assert_eq!(scaled.verdict, base.verdict);
        prop_assert_eq!(scaled.target, base.target);
    }

    #[test]
    fn substitute_agrees_with_original(t0 in nonzero_rational(), x0 in nonzero_rational(), which in 0usize..7) {
        let v = places()[which];
        let curve = pencil::curve();
        let (p0, q0) = (pencil::p().eval(&t0), pencil::q().eval(&t0));
        prop_assume!(is_local_point(&curve, &t0, &x0, v).unwrap());
        let f0 = pencil::f_arg().eval(&t0).unwrap();
        prop_assume!(!f0.is_zero());
        let direct = &x0 - &p0;
        let substitute = &x0 * (&x0 - &q0);
        prop_assume!(!direct.is_zero() && !substitute.is_zero());
        prop_assert_eq!(hilbert_symbol(&direct, &f0, v).unwrap(), hilbert_symbol(&substitute, &f0, v).unwrap());
    }

    #[test]
    fn pairing_counts_half_invariants(picks in prop::collection::vec(prop::option::of(0usize..8), 4)) {
        let a = build_class_a();
        let mut spec = AdelicPointSpec::default();
        let candidates = [RationalPlace::Prime(2), RationalPlace::Prime(3), RationalPlace::Prime(5), RationalPlace::Real];
        for (v, pick) in candidates.iter().zip(&picks) {
            if let Some(i) = pick {
                let r = sample_vanishing(&a, *v, 8, 12).unwrap();
                let s = &r.samples[*i % r.samples.len()];
                spec = spec.with(*v, SurfacePoint::affine(s.t0.clone(), s.x0.clone(), *v));
            }
        }
        let r = adelic_pairing(&a, &spec).unwrap();
        let halves = r.per_place.iter().filter(|(_, s)| *s == SymbolValue::Minus).count();
        prop_assert_eq!(r.sum == SymbolValue::Minus, halves % 2 == 1);
        prop_assert_eq!(r.obstructed, halves % 2 == 1);
    }
}

proptest! {
    // each case factors discriminants of degree up to 12 twice
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn surface_numerology_is_consistent(p in poly(3), q in poly(3)) {
        let (p, q) = (RationalFunction::from(p), RationalFunction::from(q));
        prop_assume!(p != q);
        prop_assume!(!(&p - &q).is_zero());
        let Ok(curve) = SplitCurve::new(p, q) else { return Ok(()) };
        let s = classify_surface(&curve.weierstrass(), 20).unwrap();
        prop_assert_eq!(s.euler, 12 * s.chi);
        prop_assert!(s.chi >= 0);
        if s.semistable {
            let w = curve.weierstrass();
            let total: i64 = s
                .fibers
                .iter()
                .map(|f| f.place.degree() as i64 * f.minimal_valuations.disc)
                .sum();
            prop_assert_eq!(total, s.euler);
            for f in &s.fibers {
                let m = minimalize_at(&f.place, &w).unwrap();
                prop_assert_eq!(minimalize_at(&f.place, &m).unwrap(), m);
            }
        }
    }

    #[test]
    fn fiber_table_respects_t_to_minus_t(p in poly(3), q in poly(3)) {
        let (p, q) = (RationalFunction::from(p), RationalFunction::from(q));
        let Ok(curve) = SplitCurve::new(p, q) else { return Ok(()) };
        let s = classify_surface(&curve.weierstrass(), 20).unwrap();
        let r = classify_surface(&curve.negate_var().weierstrass(), 20).unwrap();
        let mut mapped: Vec<(Place, String)> =
            s.fibers.iter().map(|f| (f.place.negate(), f.kodaira.to_string())).collect();
        mapped.sort();
        let direct: Vec<(Place, String)> =
            r.fibers.iter().map(|f| (f.place.clone(), f.kodaira.to_string())).collect();
        prop_assert_eq!(mapped, direct);
    }
}

#[test]
fn reciprocity_at_global_points() {
    let a = build_class_a();
    let curve = pencil::curve();
    let excluded = [int(-3), int(-1), int(0), int(1), int(3)];
    let values = rationals_up_to(6);
    let xs = rationals_up_to(40);
    let mut checked = 0;
    let mut non_torsion = 0;
    for t0 in values.iter().filter(|t| !excluded.contains(t)) {
        for x0 in &xs {
            let r = brauer_core::brauer::cubic_value(&curve, t0, x0).unwrap();
            if r.is_negative() || !(r.is_zero() || rat_is_square(&r).unwrap()) {
                continue;
            }
            assert_eq!(global_invariant_sum(&a, t0, x0).unwrap(), SymbolValue::Plus, "t0={t0} x0={x0}");
            checked += 1;
            if !r.is_zero() {
                non_torsion += 1;
            }
        }
    }
    assert!(checked >= 10, "only {checked} global points");
    assert!(non_torsion >= 1, "no global point off the 2-torsion");
}
