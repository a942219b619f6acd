use cyclecancel::fixtures::{self, FOLD_CYCLE};
use cyclecancel::fw::column_span;
use cyclecancel::oracle::{brute_ap, brute_tsp, hungarian_ap};
use cyclecancel::trace::{JsonLinesTrace, VecTrace};
use cyclecancel::{
    classic_apsp, diff_vector, min_index, nvs_search, phase1, phase2, reduce, solve, Certificate,
    Cost, CostMatrix, Permutation, Phase1Config, SolveOptions, WeightedCycle,
};

fn d7() -> Permutation {
    Permutation::from_images(&[
        7, 8, 11, 17, 18, 14, 5, 1, 4, 12, 9, 20, 19, 13, 16, 6, 10, 15, 3, 2,
    ])
    .unwrap()
}

#[test]
fn fold_cycle_start_and_prefix_sums() {
    let c = WeightedCycle::new(FOLD_CYCLE.to_vec()).unwrap();
    assert_eq!(c.total(), -4);
    assert!(c.is_determining(18, 0).unwrap());
    assert_eq!(
        c.prefix_sums(18).unwrap(),
        vec![
            -2, -3, -6, -9, -21, -15, -13, -10, -17, -27, -26, -24, -31, -27, -36, -25, -27, -28,
            -32, -36, -44, -35, -26, -5, -4
        ]
    );
    assert_eq!(c.fold_procedure().unwrap().start, 18);
    assert!(!c.fold_procedure().unwrap().fell_back);
    assert_eq!(c.canonical_start(0).unwrap(), 18);
    assert_eq!(c.determining_vertices(0).unwrap(), vec![18, 19, 20]);
}

#[test]
fn ten_vertex_triangle_operations() {
    let m = fixtures::ex32();
    let mut open = m.entries().to_vec();
    open[9 * 10] = Cost::Inf;
    let open = CostMatrix::new(10, open).unwrap();
    let t = classic_apsp(&open);
    let t = t.paths().unwrap();
    assert_eq!(t.dist(1, 7), Cost::Finite(3));
    assert_eq!(t.dist(1, 10), Cost::Finite(-2));

    let found = classic_apsp(&m);
    let c = found.negative_cycle().unwrap();
    assert_eq!(c.notation(), "(1 3 7 10)");
    assert_eq!(c.value, -1);
}

#[test]
fn twenty_column_spans() {
    let p = [1, 3, 7, 13, 15, 19, 20, 18, 14, 6, 7];
    let c = [20, 18, 14, 6, 7, 13, 15, 19, 20];
    assert_eq!(column_span(&p, 20), 67);
    assert_eq!(column_span(&c, 20), 60);
}

#[test]
fn eight_point_diff_vector() {
    let m = fixtures::ex34();
    let d0 = Permutation::parse_cycles(8, "(1 2 3 4 5 6 7 8)").unwrap();
    let diff = diff_vector(&m, &d0, &min_index(&m)).unwrap();
    assert_eq!(diff, vec![-11, 0, -18, 0, -30, -23, -4, 0]);
}

#[test]
fn eight_point_assignment_agrees_with_oracles() {
    let m = fixtures::ex34();
    let d0 = Permutation::parse_cycles(8, "(1 2 3 4 5 6 7 8)").unwrap();
    let mut s = phase1(&m, d0, Phase1Config::for_size(8), &mut VecTrace::default()).unwrap();
    phase2(&mut s, &mut VecTrace::default()).unwrap();
    assert_eq!(s.current_value(), 155);
    assert_eq!(hungarian_ap(&m).unwrap().1, 155);
    assert_eq!(brute_ap(&m).unwrap().1, 155);
    let r = reduce(&m, &s.current).unwrap();
    assert!(classic_apsp(&r).negative_cycle().is_none());
}

#[test]
fn eight_point_certified_tour_is_optimal() {
    let m = fixtures::ex34();
    let opts = SolveOptions {
        initial: Some(Permutation::parse_cycles(8, "(1 2 3 4 5 6 7 8)").unwrap()),
        ..Default::default()
    };
    let r = solve(&m, &opts, &mut VecTrace::default()).unwrap();
    let (_, best) = brute_tsp(&m).unwrap();
    assert_eq!(best, 161);
    assert!(r.certified);
    assert_eq!(r.tour_value, best);
    assert_eq!(m.value(&r.tour), Cost::Finite(best));
}

#[test]
fn eight_point_from_random_starts() {
    let m = fixtures::ex34();
    for seed in 0..20 {
        let opts = SolveOptions {
            seed,
            ..Default::default()
        };
        let r = solve(&m, &opts, &mut VecTrace::default()).unwrap();
        assert_eq!(r.ap_value, 155);
        assert!(r.tour.is_n_cycle());
        if r.certified {
            assert_eq!(r.tour_value, 161);
        }
    }
}

#[test]
fn twenty_point_instance() {
    let m = fixtures::ex35();
    assert_eq!(hungarian_ap(&m).unwrap().1, 212);
    let d7_value = m.value(&d7()).finite().unwrap();
    assert_eq!(d7_value, 213);
    for seed in 0..5 {
        let opts = SolveOptions {
            seed,
            ..Default::default()
        };
        let r = solve(&m, &opts, &mut VecTrace::default()).unwrap();
        assert_eq!(r.ap_value, 212);
        assert!(r.tour.is_n_cycle());
        assert!(r.tour_value >= r.ap_value);
        if r.certified {
            assert_eq!(r.tour_value, d7_value);
        }
    }
}

#[test]
fn twenty_point_negative_subpath_sweep() {
    let m = fixtures::ex35();
    let r = reduce(&m, &d7()).unwrap();
    let o = nvs_search(&r, &mut VecTrace::default());
    let c = o.cycle.unwrap();
    assert_eq!(c.value, -1);
    let mut vertices = c.vertices.clone();
    vertices.sort();
    assert_eq!(vertices, vec![6, 11, 12, 13, 18, 20]);
    assert!(o.blocks <= c.len());
}

#[test]
fn json_lines_trace_has_header_and_events() {
    let m = fixtures::ex35();
    let r = reduce(&m, &d7()).unwrap();
    let mut sink = JsonLinesTrace::new(Vec::new());
    nvs_search(&r, &mut sink);
    let bytes = sink.finish().unwrap();
    let text = String::from_utf8(bytes).unwrap();
    let mut lines = text.lines();
    let header: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(header["schema"], "cyclecancel-trace");
    assert_eq!(header["version"], 1);
    let kinds: Vec<String> = lines
        .map(|l| {
            serde_json::from_str::<serde_json::Value>(l).unwrap()["event"]
                .as_str()
                .unwrap()
                .to_string()
        })
        .collect();
    assert!(kinds.iter().any(|k| k == "cycle-found"));
    assert!(kinds.iter().any(|k| k == "path-underlined"));
}

#[test]
fn no_gap_certificate_on_tour_shaped_optimum() {
    let m = CostMatrix::<i64>::from_fn(6, |i, j| Cost::Finite(if j == i % 6 + 1 { 1 } else { 50 }))
        .unwrap();
    let r = solve(&m, &SolveOptions::default(), &mut VecTrace::default()).unwrap();
    assert_eq!(r.tour_value, 6);
    assert_eq!(r.certificate, Some(Certificate::NoGap));
}
