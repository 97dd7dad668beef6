//! Laws of the scalar rings and of binary forms.

use proptest::collection::vec;
use proptest::prelude::*;

use tangent_core::homog::{HomogPoly, Var};
use tangent_core::scalar::{
    Field, FromRational, JetRing, ParamPolyRing, PrimeField, Rational, Rationals, Ring,
};

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..=50, 1i64..=12).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

fn form(degree: usize) -> impl Strategy<Value = HomogPoly<Rational>> {
    vec(rational(), degree + 1).prop_map(HomogPoly::from_coeffs)
}

fn check_ring_laws<R: Ring>(r: &R, a: &R::Elem, b: &R::Elem, c: &R::Elem) -> Result<(), TestCaseError> {
    prop_assert_eq!(r.add(a, b), r.add(b, a));
    prop_assert_eq!(r.mul(a, b), r.mul(b, a));
    prop_assert_eq!(r.add(&r.add(a, b), c), r.add(a, &r.add(b, c)));
    prop_assert_eq!(r.mul(&r.mul(a, b), c), r.mul(a, &r.mul(b, c)));
    prop_assert_eq!(r.mul(a, &r.add(b, c)), r.add(&r.mul(a, b), &r.mul(a, c)));
    prop_assert_eq!(r.add(a, &r.zero()), a.clone());
    prop_assert_eq!(r.mul(a, &r.one()), a.clone());
    prop_assert!(r.is_zero(&r.add(a, &r.neg(a))));
    prop_assert_eq!(r.sub(a, b), r.add(a, &r.neg(b)));
    let mut acc = c.clone();
    r.mul_add_assign(&mut acc, a, b);
    prop_assert_eq!(acc, r.add(c, &r.mul(a, b)));
    Ok(())
}

proptest! {
    #[test]
    fn rationals_form_a_field(a in rational(), b in rational(), c in rational()) {
        check_ring_laws(&Rationals, &a, &b, &c)?;
        if !a.is_zero() {
            prop_assert_eq!(Rationals.mul(&a, &Rationals.inv(&a).unwrap()), Rational::one());
        }
        prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
    }

    #[test]
    fn prime_field_laws(p_idx in 0usize..3, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let p = [2u64, 1_000_003, 2_305_843_009_213_693_951][p_idx];
        let f = PrimeField::new(p).unwrap();
        let (a, b, c) = (f.elem(a), f.elem(b), f.elem(c));
        check_ring_laws(&f, &a, &b, &c)?;
        if !f.is_zero(&a) {
            prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), f.one());
        }
    }

    #[test]
    fn reduction_mod_p_is_a_homomorphism(a in rational(), b in rational()) {
        let f = PrimeField::new(1_000_003).unwrap();
        let red = |x: &Rational| f.from_rational(x).unwrap();
        prop_assert_eq!(red(&Rationals.add(&a, &b)), f.add(&red(&a), &red(&b)));
        prop_assert_eq!(red(&Rationals.mul(&a, &b)), f.mul(&red(&a), &red(&b)));
    }

    #[test]
    fn jets_form_a_ring(xs in vec(rational(), 9)) {
        let jets = JetRing::new(Rationals, 3);
        let lift = |i: usize| {
            let mut j = jets.lift(xs[i].clone(), i % 3).unwrap();
            j.grad[(i + 1) % 3] = xs[i + 3].clone();
            j
        };
        check_ring_laws(&jets, &lift(0), &lift(1), &lift(2))?;
    }

    #[test]
    fn jet_gradients_equal_symbolic_partials(coeffs in vec(-6i64..=6, 6), point in vec(rational(), 2)) {
        // p = c0 x^2 y + c1 x y^2 + c2 x^3 + c3 y + c4 x y + c5
        let sym = ParamPolyRing::new(Rationals, vec!["x".into(), "y".into()]);
        let jets = JetRing::new(Rationals, 2);
        fn build<R: Ring>(r: &R, x: &R::Elem, y: &R::Elem, c: &[i64]) -> R::Elem {
            let terms = [
                r.mul(&r.mul(x, x), y),
                r.mul(&r.mul(x, y), y),
                r.pow(x, 3),
                y.clone(),
                r.mul(x, y),
                r.one(),
            ];
            terms.iter().zip(c).fold(r.zero(), |acc, (t, &k)| r.add(&acc, &r.scale_i64(t, k)))
        }
        let p = build(&sym, &sym.var(0).unwrap(), &sym.var(1).unwrap(), &coeffs);
        let jx = jets.lift(point[0].clone(), 0).unwrap();
        let jy = jets.lift(point[1].clone(), 1).unwrap();
        let j = build(&jets, &jx, &jy, &coeffs);
        prop_assert_eq!(j.value, sym.eval(&p, &point));
        for v in 0..2 {
            prop_assert_eq!(&j.grad[v], &sym.eval(&sym.partial(&p, v), &point));
        }
    }

    #[test]
    fn parameter_polynomials_form_a_ring(cs in vec(-5i64..=5, 9)) {
        let r = ParamPolyRing::new(Rationals, vec!["a".into(), "b".into()]);
        let (x, y) = (r.var(0).unwrap(), r.var(1).unwrap());
        let mk = |k: usize| {
            let lin = r.add(&r.scale_i64(&x, cs[3 * k]), &r.scale_i64(&y, cs[3 * k + 1]));
            r.add(&r.mul(&lin, &lin), &r.from_i64(cs[3 * k + 2]))
        };
        check_ring_laws(&r, &mk(0), &mk(1), &mk(2))?;
    }

    #[test]
    fn forms_render_and_parse_back(p in (0usize..7).prop_flat_map(form)) {
        let text = p.render(&Rationals);
        prop_assert_eq!(HomogPoly::parse(&text, p.degree(), &Rationals).unwrap(), p);
    }

    #[test]
    fn division_by_a_variable_undoes_multiplication(p in (0usize..7).prop_flat_map(form), use_s in any::<bool>()) {
        let var = if use_s { Var::S } else { Var::T };
        let r = Rationals;
        prop_assert_eq!(p.mul_var(var, &r).div_linear(var, &r).unwrap(), p);
    }

    #[test]
    fn forms_satisfy_euler(p in (1usize..7).prop_flat_map(form)) {
        // s dp/ds + t dp/dt = deg(p) p
        let r = Rationals;
        let ds = p.partial(Var::S, &r).unwrap().mul_var(Var::S, &r);
        let dt = p.partial(Var::T, &r).unwrap().mul_var(Var::T, &r);
        let k = Rational::from(p.degree() as i64);
        prop_assert_eq!(ds.add(&dt, &r).unwrap(), p.scale(&k, &r));
    }

    #[test]
    fn form_products_evaluate_pointwise(p in form(3), q in form(2), s0 in rational(), t0 in rational()) {
        let r = Rationals;
        let lhs = p.mul(&q, &r).eval(&s0, &t0, &r);
        prop_assert_eq!(lhs, r.mul(&p.eval(&s0, &t0, &r), &q.eval(&s0, &t0, &r)));
    }

    #[test]
    fn gcd_divides_both(p in form(2), q in form(2), common in form(1)) {
        let r = Rationals;
        prop_assume!(!common.is_zero(&r) && !p.is_zero(&r) && !q.is_zero(&r));
        let (a, b) = (p.mul(&common, &r), q.mul(&common, &r));
        let g = a.gcd(&b, &r).unwrap();
        prop_assert!(g.degree() >= 1);
        prop_assert!(a.div_exact(&g, &r).is_ok() && b.div_exact(&g, &r).is_ok());
    }
}
