use proptest::prelude::*;

use expn_core::closure::{closure, interior, limit_points};
use expn_core::corpus;
use expn_core::expr::SetExpr;
use expn_core::pattern::{equivalent, subset_of};
use expn_core::point::{Point, Universe};
use expn_core::topology::{OpenDescriptor, Topology};
use expn_core::witness::{self, Certificate};

fn topologies() -> Vec<Topology> {
    vec![
        Topology::tau_c(Universe::with_rank(2)),
        Topology::tau_fc2(Universe::with_rank(2)).unwrap(),
        Topology::tau_0(Universe::with_rank(2)),
        Topology::tau_fcn(Universe::with_rank(3), None).unwrap(),
    ]
}

fn topology() -> impl Strategy<Value = Topology> {
    (0..4usize).prop_map(|i| topologies().swap_remove(i))
}

fn small_point() -> impl Strategy<Value = Point> {
    prop::collection::btree_set(0u32..12, 0..=3).prop_map(Point::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn meet_is_a_semilattice(a in small_point(), b in small_point(), c in small_point()) {
        prop_assert_eq!(a.meet(&a), a.clone());
        prop_assert_eq!(a.meet(&b), b.meet(&a));
        prop_assert_eq!(a.meet(&b.meet(&c)), a.meet(&b).meet(&c));
        prop_assert!(a.meet(&b).leq(&a) && a.meet(&b).leq(&b));
        prop_assert_eq!(a.leq(&b), a.meet(&b) == a);
    }

    #[test]
    fn closure_is_a_hull(topo in topology(), seed in any::<u64>()) {
        let u = topo.universe().clone();
        let mut r = corpus::rng(seed);
        let s = corpus::expr(&mut r, &u, 5, 12);
        let t = corpus::expr(&mut r, &u, 5, 12);
        let cl = closure(&topo, &s).unwrap();
        prop_assert!(subset_of(&u, &s, &cl), "not extensive on {}", s);
        prop_assert!(equivalent(&u, &closure(&topo, &cl).unwrap(), &cl), "not idempotent on {}", s);
        let st = SetExpr::or([s.clone(), t.clone()]);
        prop_assert!(subset_of(&u, &cl, &closure(&topo, &st).unwrap()), "not monotone on {} {}", s, t);
        prop_assert!(subset_of(&u, &limit_points(&topo, &s).unwrap(), &cl));
    }

    #[test]
    fn interior_is_dual_to_closure(topo in topology(), seed in any::<u64>()) {
        let u = topo.universe().clone();
        let s = corpus::expr(&mut corpus::rng(seed), &u, 5, 12);
        let int = interior(&topo, &s).unwrap();
        let dual = SetExpr::not(closure(&topo, &SetExpr::not(s.clone())).unwrap());
        prop_assert!(equivalent(&u, &int, &dual), "duality fails on {}", s);
        prop_assert!(subset_of(&u, &int, &s));
    }

    #[test]
    fn text_forms_round_trip(topo in topology(), seed in any::<u64>()) {
        let u = topo.universe().clone();
        let mut r = corpus::rng(seed);
        let s = corpus::expr(&mut r, &u, 5, 12);
        let back: SetExpr = s.to_string().parse().unwrap();
        prop_assert_eq!(back.to_string(), s.to_string());
        prop_assert!(equivalent(&u, &back, &s));
        let p = corpus::point(&mut r, &u, 12);
        prop_assert_eq!(p.to_string().parse::<Point>().unwrap(), p.clone());
        let pool = corpus::code_pool(&mut r, 5, 12);
        let d = corpus::basic_neighborhood(&mut r, &topo, &p, &pool);
        prop_assert_eq!(d.to_string().parse::<OpenDescriptor>().unwrap(), d);
    }

    #[test]
    fn certificates_round_trip(topo in topology(), x in small_point(), y in small_point()) {
        prop_assume!(x != y && x.rank() <= topo.n() && y.rank() <= topo.n());
        let cert = witness::separator_function(&topo, &x, &y);
        prop_assume!(cert.is_ok());
        let cert = cert.unwrap();
        let json = cert.to_json();
        let back = Certificate::from_json(&json).unwrap();
        prop_assert_eq!(back.to_json(), json);
        prop_assert!(back.verifies());
    }
}
