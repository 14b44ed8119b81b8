use expn_core::closure::{closure, interior, limit_points};
use expn_core::corpus;
use expn_core::oracle::{compare, oracle_closure, oracle_interior, oracle_limit_points, Window};
use expn_core::point::Universe;
use expn_core::topology::Topology;

fn run(topo: &Topology, w: Window, count: usize, seed: u64) {
    let u = topo.universe().clone();
    let mut r = corpus::rng(seed);
    for _ in 0..count {
        let s = corpus::expr(&mut r, &u, 6, 16);
        let lim = limit_points(topo, &s).unwrap();
        let a = compare(&u, &lim, &oracle_limit_points(topo, &s, w).unwrap(), w);
        assert!(a.agrees(), "limit {} {s}: {a:?}", topo.name());
        let cl = closure(topo, &s).unwrap();
        let a = compare(&u, &cl, &oracle_closure(topo, &s, w).unwrap(), w);
        assert!(a.agrees(), "closure {} {s}: {a:?}", topo.name());
        let int = interior(topo, &s).unwrap();
        let a = compare(&u, &int, &oracle_interior(topo, &s, w).unwrap(), w);
        assert!(a.agrees(), "interior {} {s}: {a:?}", topo.name());
    }
}

#[test]
fn rank_two_families_match_the_oracle() {
    let u = Universe::with_rank(2);
    let w = Window::new(16, 1, 1);
    run(&Topology::tau_c(u.clone()), w, 300, 11);
    run(&Topology::tau_fc2(u.clone()).unwrap(), w, 300, 12);
    run(&Topology::tau_0(u), w, 300, 13);
}

#[test]
fn rank_three_families_match_the_oracle_with_wider_pads() {
    let u = Universe::with_rank(3);
    let w = Window::new(16, 3, 3);
    run(&Topology::tau_c(u.clone()), w, 60, 21);
    run(&Topology::tau_fcn(u, None).unwrap(), w, 60, 22);
}
