use expn_core::oracle::{oracle_closure, oracle_interior, Window};
use expn_web::{grid, joint_sequence, neighborhood, topology};

#[test]
fn closure_grid_adds_only_zero_to_a_cylinder() {
    let g = grid("tau_c", 2, 8, "(cyl {} (almost A + [] - []))", "closure").unwrap();
    let added: Vec<_> = g.cells.iter().filter(|c| c.in_result && !c.in_set).map(|c| c.point.as_str()).collect();
    assert_eq!(added, ["{}"]);
    assert!(g.exact);
}

#[test]
fn grid_cells_match_window_enumeration() {
    let w = Window::new(10, 1, 1);
    for kind in ["tau_c", "tau_fc2", "tau_0"] {
        let topo = topology(kind, 2).unwrap();
        for expr in ["(or (up {1}) (pts {2 3}))", "(cyl {} (almost A + [] - []))", "(not (up {4}))"] {
            let s = expr.parse().unwrap();
            for (op, oracle) in [("closure", oracle_closure(&topo, &s, w)), ("interior", oracle_interior(&topo, &s, w))] {
                let oracle = oracle.unwrap();
                for cell in grid(kind, 2, 10, expr, op).unwrap().cells {
                    let p = cell.point.parse().unwrap();
                    assert_eq!(cell.in_result, oracle.contains(&p), "{kind} {op} of {expr} at {p}");
                }
            }
        }
    }
}

#[test]
fn zero_neighbourhood_of_the_colour_sensitive_topology_drops_a_singletons() {
    let g = neighborhood("tau_fc2", 2, 6, "{}", "", "").unwrap();
    let singles: Vec<_> = g.cells.iter().filter(|c| c.i.is_some() && c.i == c.j && c.in_result).map(|c| c.i.unwrap()).collect();
    assert_eq!(singles, [1, 3, 5]);
    let g = neighborhood("tau_c", 2, 6, "{}", "1 2", "").unwrap();
    let inside = |p: &str| g.cells.iter().find(|c| c.point == p).unwrap().in_result;
    assert!(inside("{}") && inside("{3}") && !inside("{1}") && !inside("{2 4}"));
}

#[test]
fn explicit_descriptors_are_parsed() {
    let g = neighborhood("tau_c", 2, 4, "", "", "(upminus {1} [{1 2}])").unwrap();
    let members: Vec<_> = g.cells.iter().filter(|c| c.in_result).map(|c| c.point.as_str()).collect();
    assert_eq!(members, ["{0 1}", "{1}", "{1 3}"]);
    assert!(neighborhood("tau_c", 2, 4, "", "", "(upminus {1}").is_err());
}

#[test]
fn joint_sequence_meets_stay_outside_w() {
    let s = joint_sequence("tau_fc2", 2, 10).unwrap();
    assert!(s.verified);
    assert_eq!(s.steps.len(), 10);
    assert!(s.steps.iter().all(|st| !st.meet_in_w));
    assert!(joint_sequence("tau_c", 2, 10).is_err());
    for depth in 1..6 {
        assert!(joint_sequence("tau_fc2", 2, depth).unwrap().verified, "depth {depth}");
    }
    assert!(joint_sequence("tau_fc2", 2, 0).is_err());
}
