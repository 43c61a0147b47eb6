mod common;

use common::{context, golden, graph};
use latcoh::complex::{Barcode, GradedRoot, SublevelModel};
use latcoh::linalg::fp::{Field, P31};
use latcoh::reduction::*;
use latcoh::series::{ar_series, pe_levels};
use latcoh::specseq::{Page, SpectralTable};
use latcoh::{BlowUpCenter, Filtration, LatticeContext, PlumbingGraph};

const BUDGET: u128 = 50_000_000;

fn ceil_div(a: i64, b: i64) -> i64 {
    (a + b - 1).div_euclid(b)
}

fn bars(model: &SublevelModel) -> Vec<(usize, i64, Option<i64>)> {
    let mut v: Vec<_> = Barcode::of_model(model, &Field::new(P31))
        .bars
        .iter()
        .map(|b| (b.dim, b.birth, b.death))
        .collect();
    v.sort();
    v
}

fn root_shape(model: &SublevelModel) -> Vec<(i64, Option<i64>)> {
    let root = GradedRoot::of_model(model);
    let mut v: Vec<_> = root
        .nodes
        .iter()
        .map(|n| (n.level, n.parent.map(|p| root.nodes[p].level)))
        .collect();
    v.sort();
    v
}

/// Vertex carrying the single arrow of a decorated graph, after blow-ups.
fn decorated(name: &str) -> (PlumbingGraph, Vec<i64>, usize) {
    let (g, s) = graph(name).apply_decorations();
    let v = s.support()[0];
    (g, s.coeffs.clone(), v)
}

#[test]
fn rationality() {
    assert!(is_rational(&graph("a2")).rational);
    for p in 1..=6 {
        let g = PlumbingGraph::parse(&format!("vertex 1 -{p}\n")).unwrap();
        assert!(is_rational(&g).rational, "p = {p}");
    }
    let c = is_rational(&graph("sigma237"));
    assert!(!c.rational);
    assert_eq!(c.z_min, vec![6, 3, 2, 1]);
    assert_eq!(c.chi, 0);
    for name in ["latnv1", "twonodes"] {
        let c = is_rational(&graph(name));
        let m = graph(name).intersection_matrix();
        for (i, row) in m.iter().enumerate() {
            let p: i64 = row.iter().zip(&c.z_min).map(|(a, b)| a * b).sum();
            assert!(p <= 0, "{name}: (Z_min, E_{i}) = {p}");
        }
        assert!(!c.rational, "{name}");
    }
}

#[test]
fn sr_sets() {
    let v = check_sr_set(&graph("latnv1"), &[1, 5], DEFAULT_DELTA_MAX).unwrap();
    assert!(v.is_confirmed());
    let v = check_sr_set(&graph("sigma237"), &[0], DEFAULT_DELTA_MAX).unwrap();
    assert!(v.is_confirmed());
    let v = check_sr_set(&graph("twonodes"), &[1, 6], DEFAULT_DELTA_MAX).unwrap();
    assert!(v.is_confirmed());
    for name in ["a2", "sigma237", "latnv1", "twonodes"] {
        let g = graph(name);
        let all: Vec<usize> = (0..g.len()).collect();
        assert!(check_sr_set(&g, &all, DEFAULT_DELTA_MAX).unwrap().is_confirmed(), "{name}");
    }
    assert!(matches!(check_sr_set(&graph("a2"), &[], 3), Err(ReductionError::Empty)));
    assert!(matches!(
        check_sr_set(&graph("a2"), &[7], 3),
        Err(ReductionError::VertexOutOfRange(7))
    ));
}

#[test]
fn sigma237_reduced_weights() {
    let ctx = context("sigma237");
    let rc = ReducedContext::new(&ctx, &ctx.zero_class(), &[0]).unwrap();
    let w: Vec<i64> = (0..=8).map(|l| rc.wbar(&[l])).collect();
    assert_eq!(w, vec![0, 1, 0, 0, 0, 0, 0, 1, 1]);
    let mut acc = 0;
    for l in 0..80 {
        assert_eq!(rc.wbar(&[l]), acc, "l = {l}");
        acc += 1 + l - ceil_div(l, 2) - ceil_div(l, 3) - ceil_div(l, 7);
    }
    // the drops of wbar add up to eu
    let drops: i64 = (0..80).map(|l| (rc.wbar(&[l]) - rc.wbar(&[l + 1])).max(0)).sum();
    assert_eq!(drops, 1);
}

#[test]
fn blow_up_of_minus_two_vertex() {
    // base point blown up: x(l) = l E_2 + ceil(l/3) E_1
    let (g, s, v) = decorated("p2_b1");
    let ctx = LatticeContext::new(&g);
    let other = 1 - v;
    assert_eq!(g.euler(v), -1);
    assert_eq!(g.euler(other), -3);
    let rc = ReducedContext::new(&ctx, &ctx.zero_class(), &[v]).unwrap();
    for l in 0..40 {
        let x = rc.universal_cycle(&[l]);
        assert_eq!(x[v], l);
        assert_eq!(x[other], ceil_div(l, 3));
        let l1 = x[other];
        assert_eq!(rc.wbar(&[l]), (3 * l1 * l1 + l * l - 2 * l1 * l - l1 + l) / 2);
    }
    let w: Vec<i64> = (0..7).map(|l| rc.wbar(&[l])).collect();
    assert_eq!(w, vec![0, 1, 2, 4, 7, 10, 14]);
    assert_eq!(rc.filtration(&s).unwrap().coeffs, vec![1]);

    // generic point blown up: x(l) = l (E_1 + E_2) and wbar = l^2
    let base = graph("p2_b0");
    let (g, _) = base.without_arrows().blow_up(BlowUpCenter::Vertex(1)).unwrap();
    let ctx = LatticeContext::new(&g);
    let e1 = (0..g.len()).find(|i| g.euler(*i) == -3).unwrap();
    let rc = ReducedContext::new(&ctx, &ctx.zero_class(), &[e1]).unwrap();
    for l in 0..30 {
        assert_eq!(rc.universal_cycle(&[l]), vec![l, l]);
        assert_eq!(rc.wbar(&[l]), l * l);
    }
    // and without blowing up, the (-2) vertex itself
    let ctx = LatticeContext::new(&base);
    let rc = ReducedContext::new(&ctx, &ctx.zero_class(), &[0]).unwrap();
    assert_eq!((0..6).map(|l| rc.wbar(&[l])).collect::<Vec<_>>(), vec![0, 1, 4, 9, 16, 25]);
}

fn parse_grid(text: &str) -> Vec<Vec<i64>> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
        .collect()
}

#[test]
fn two_node_tables_match_golden() {
    for (name, bad, size) in [("twonodes", [1usize, 6], 19i64), ("latnv1", [1, 5], 14)] {
        let ctx = context(name);
        let rc = ReducedContext::new(&ctx, &ctx.zero_class(), &bad).unwrap();
        let table = rc.table(&[size, size]);
        let ours = parse_grid(&table.to_grid());
        let expected = parse_grid(&golden(&format!("{name}_wbar.txt")));
        assert_eq!(ours, expected, "{name}");
    }
    let ctx = context("twonodes");
    let rc = ReducedContext::new(&ctx, &ctx.zero_class(), &[1, 6]).unwrap();
    assert_eq!(rc.wbar(&[0, 0]), 0);
    // the printed table runs over 0..=19 in both directions
    assert_eq!(rc.wbar(&[19, 19]), 2);
    assert_eq!(rc.wbar(&[18, 18]), 0);
}

#[test]
fn universal_cycle_properties() {
    for (name, bad) in [
        ("a2", vec![0usize]),
        ("sigma237", vec![0]),
        ("latnv1", vec![1, 5]),
        ("twonodes", vec![1, 6]),
    ] {
        let ctx = context(name);
        let m = ctx.matrix().to_vec();
        for h in ctx.classes() {
            let rc = ReducedContext::new(&ctx, &h, &bad).unwrap();
            let sd = ctx.class_data(&h).s_h_dual;
            let rect = vec![6i64; bad.len()];
            let pts = rc.points(&rect);
            for (p, _) in &pts {
                let x = rc.universal_cycle(p);
                assert_eq!(rc.project(&x), *p);
                for i in (0..ctx.rank()).filter(|i| !bad.contains(i)) {
                    let pair: i64 = m[i].iter().zip(&x).map(|(a, b)| a * b).sum::<i64>() - sd[i];
                    assert!(pair <= 0, "{name} {h}: (x + s_h, E_{i}) = {pair}");
                }
                for k in 0..p.len() {
                    if p[k] < rect[k] {
                        let mut q = p.clone();
                        q[k] += 1;
                        let y = rc.universal_cycle(&q);
                        assert!(x.iter().zip(&y).all(|(a, b)| a <= b), "{name}: not monotone");
                    }
                }
            }
        }
    }
}

#[test]
fn universal_cycle_minimizes_chi() {
    for (name, bad, bound) in [
        ("a2", vec![0usize], 5i64),
        ("sigma237", vec![0], 7),
        ("p2_b1", vec![], 8),
    ] {
        let (g, bad) = if bad.is_empty() {
            let (g, _, v) = decorated(name);
            (g, vec![v])
        } else {
            (graph(name), bad)
        };
        let ctx = LatticeContext::new(&g);
        for h in ctx.classes() {
            let rc = ReducedContext::new(&ctx, &h, &bad).unwrap();
            let w = ctx.weight(&h);
            let n = ctx.rank();
            let mut l = vec![0i64; n];
            'points: loop {
                let lb = rc.project(&l);
                assert!(w.chi(&l) >= rc.wbar(&lb), "{name} {h} at {l:?}");
                let mut k = n;
                loop {
                    if k == 0 {
                        break 'points;
                    }
                    k -= 1;
                    if l[k] < bound {
                        l[k] += 1;
                        break;
                    }
                    l[k] = 0;
                }
            }
        }
    }
}

#[test]
fn reduced_and_full_homology_agree() {
    let cap = 6;
    for (name, bad) in [
        ("a2", vec![0usize]),
        ("sigma237", vec![0]),
        ("latnv1", vec![1, 5]),
        ("p3", vec![0]),
    ] {
        let ctx = context(name);
        for h in ctx.classes() {
            let full = SublevelModel::quadrant(&ctx.weight(&h), cap, BUDGET).unwrap();
            let rc = ReducedContext::new(&ctx, &h, &bad).unwrap();
            let red = rc.quadrant_model(cap, BUDGET).unwrap();
            assert_eq!(bars(&full), bars(&red), "{name} {h}");
            assert_eq!(root_shape(&full), root_shape(&red), "{name} {h}");
        }
    }
    // reduced rectangle over the projected Z_K carries the same homology
    let ctx = context("sigma237");
    let rc = ReducedContext::new(&ctx, &ctx.zero_class(), &[0]).unwrap();
    let rect = rc.default_rect();
    let full = SublevelModel::rectangle(&ctx.weight(&ctx.zero_class()), &[2, 1, 1, 1], BUDGET).unwrap();
    let red = rc.rectangle_model(&rect, BUDGET).unwrap();
    let b = |m: &SublevelModel| {
        let bc = Barcode::of_model(m, &Field::new(P31));
        (-3..=4).map(|n| bc.bettis(n)).collect::<Vec<_>>()
    };
    assert_eq!(b(&full), b(&red));
}

#[test]
fn reduced_spectral_tables_agree() {
    let cap = 4;
    let ctx = context("latnv1");
    let mut s = vec![0i64; 7];
    s[1] = 1;
    s[5] = 1;
    let h = ctx.zero_class();
    let full = SublevelModel::quadrant(&ctx.weight(&h), cap, BUDGET).unwrap();
    let rc = ReducedContext::new(&ctx, &h, &[1, 5]).unwrap();
    let red = rc.quadrant_model(cap, BUDGET).unwrap();
    let ft = SpectralTable::build(&full, &Filtration::new(&ctx, &s).unwrap(), &pe_levels(&full, cap)).unwrap();
    let rt = SpectralTable::build(&red, &rc.filtration(&s).unwrap(), &pe_levels(&red, cap)).unwrap();
    assert_eq!(ft.degeneration(), rt.degeneration());
    for page in [Page::Finite(1), Page::Finite(2), Page::Finite(3), Page::Infinity] {
        for n in pe_levels(&full, cap) {
            let (a, b) = (ft.row(n), rt.row(n));
            assert_eq!(
                a.map(|r| r.entries(page)).unwrap_or_default(),
                b.map(|r| r.entries(page)).unwrap_or_default(),
                "level {n} page {page:?}"
            );
        }
    }
    // E^* support outside the nodes cannot be reduced
    assert!(matches!(rc.filtration(&[1; 7]), Err(ReductionError::SupportNotBad)));
}

/// `wbar(0..=L)` with `L >= min_len` and `wbar(L)` the strict maximum.
fn wbar_run(rc: &ReducedContext, min_len: i64) -> Vec<i64> {
    let mut w: Vec<i64> = (0..min_len).map(|l| rc.wbar(&[l])).collect();
    loop {
        let next = rc.wbar(&[w.len() as i64]);
        let top = w.iter().copied().max().unwrap();
        w.push(next);
        if next > top && w.len() as i64 > min_len {
            return w;
        }
    }
}

#[test]
fn almost_rational_series() {
    let ctx = context("sigma237");
    let rc = ReducedContext::new(&ctx, &ctx.zero_class(), &[0]).unwrap();
    let w = wbar_run(&rc, 30);
    let cap = *w.last().unwrap() - 1;
    let model = rc.quadrant_model(cap, BUDGET).unwrap();
    let t = SpectralTable::build(&model, &rc.filtration(&[1, 0, 0, 0]).unwrap(), &pe_levels(&model, cap)).unwrap();
    let r = ar_series(&ctx, 0, &w, Some(&t)).unwrap();
    assert_eq!(r.pe1_matches, Some(true));
    assert_eq!(r.pe_infty_matches, Some(true));
    assert!(!r.rational);
    assert!(r.z00_matches_increments);
    assert_eq!(r.z_plus_at_1, 1);

    let (g, _, v) = decorated("p2_b1");
    let ctx = LatticeContext::new(&g);
    let rc = ReducedContext::new(&ctx, &ctx.zero_class(), &[v]).unwrap();
    let w = wbar_run(&rc, 42);
    let r = ar_series(&ctx, v, &w, None).unwrap();
    assert!(r.rational);
    assert_eq!(r.m_phi, "3/2");
    assert_eq!(r.p_c_is_semigroup, Some(true));
    assert!(r.z00_matches_increments);
}
