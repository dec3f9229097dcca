//! Acceptance criteria. Run with `cargo test --test acceptance`; prints one
//! PASS/FAIL line per criterion and exits nonzero if any fails.

use std::time::{Duration, Instant};

use mnov_core::diffalg::{check_identity_suite, DPoly, Flavor};
use mnov_core::enumeration::{
    enum_nmne, enum_nmne_class, enum_populated, label_classes, quotient_dim_bruteforce, rank,
    DEFAULT_TREE_CAP,
};
use mnov_core::findim::{commutes, fixtures, identity_failures};
use mnov_core::identities::IdentitySystem;
use mnov_core::maps::{eval_in_pcd, eval_tree, g_map, generate_from_x, phi, psi, SemanticNormalizer, PCD};
use mnov_core::sample::{random_poly, random_tree, rng};
use mnov_core::symbol::declare_symbols;
use mnov_core::syntax::{parse_mono, parse_tree};
use mnov_core::treealg::{graft, relation_elements, Normalizer, RTree, TreePoly};
use mnov_core::{Op, Rat, Var};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome, Option<Duration>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn labels(nv: u32, no: u32) -> (Vec<Var>, Vec<Op>) {
    ((0..nv).map(Var).collect(), (0..no).map(Op).collect())
}

fn identity_suites() -> Outcome {
    let (vars, ops) = labels(3, 2);
    let mut r = rng(101);
    for fl in Flavor::ALL {
        for n in 0..200 {
            let [x, y, z] = [(); 3].map(|_| random_poly(&mut r, fl, &vars, &ops, 3, 1, 2));
            for &w in &ops {
                for &t in &ops {
                    let res = check_identity_suite(fl, &x, &y, &z, w, t).map_err(|e| e.to_string())?;
                    if let Some(i) = res.iter().position(|p| !p.is_zero()) {
                        return Err(format!(
                            "{fl}: {} nonzero at sample {n}",
                            fl.identity_system().names()[i]
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}

fn leibniz_and_commutation() -> Outcome {
    let (vars, ops) = labels(3, 2);
    let mut r = rng(202);
    for fl in Flavor::ALL {
        for n in 0..200 {
            let p = random_poly(&mut r, fl, &vars, &ops, 3, 2, 3);
            let q = random_poly(&mut r, fl, &vars, &ops, 3, 2, 3);
            for &w in &ops {
                let lhs = p.mul(&q).unwrap().derive(w);
                let rhs = p.derive(w).mul(&q).unwrap().add(&p.mul(&q.derive(w)).unwrap()).unwrap();
                ensure(lhs == rhs, || format!("{fl}: Leibniz fails at sample {n}"))?;
            }
            let (a, b) = (ops[0], ops[1]);
            let ab = p.derive(b).derive(a);
            let ba = p.derive(a).derive(b);
            if fl.derivs_commute() {
                ensure(ab == ba, || format!("{fl}: derivations fail to commute at sample {n}"))?;
            }
        }
        if !fl.derivs_commute() {
            let x = DPoly::var(fl, vars[0]);
            let ab = x.derive(ops[1]).derive(ops[0]);
            let ba = x.derive(ops[0]).derive(ops[1]);
            ensure(ab != ba, || format!("{fl}: D[a,b](x) equals D[b,a](x)"))?;
            ensure(ab == DPoly::dvar(fl, vec![ops[0], ops[1]], vars[0]), || "witness shape".into())?;
        }
    }
    Ok(())
}

fn random_small_tree(r: &mut mnov_core::sample::SampleRng, vars: &[Var], ops: &[Op], max: usize) -> RTree {
    use rand::Rng;
    let n = r.gen_range(1..=max);
    random_tree(r, vars, ops, n)
}

fn normalizer_soundness() -> Outcome {
    use rand::Rng;
    let (vars, ops) = labels(3, 2);
    let mut r = rng(303);
    let mut norm = Normalizer::new();
    for n in 0..100 {
        let x = random_small_tree(&mut r, &vars, &ops, 4);
        let y = random_small_tree(&mut r, &vars, &ops, 4);
        let z = random_small_tree(&mut r, &vars, &ops, 4);
        let (w, t) = (ops[r.gen_range(0..2)], ops[r.gen_range(0..2)]);
        let (r1, r2) = relation_elements(&x, &y, &z, w, t);
        let mut rel = if n % 2 == 0 { r1 } else { r2 };
        // Every third instance is multiplied through on a random side.
        if n % 3 == 0 {
            let s = TreePoly::from_tree(random_small_tree(&mut r, &vars, &ops, 3));
            let o = ops[r.gen_range(0..2)];
            rel = if r.gen_bool(0.5) { graft(&rel, o, &s) } else { graft(&s, o, &rel) };
        }
        let out = norm.try_normalize(&rel).map_err(|e| e.to_string())?;
        ensure(out.is_zero(), || format!("relation instance {n} normalizes to {} terms", out.len()))?;
    }
    for n in 0..100 {
        let u = random_small_tree(&mut r, &vars, &ops, 8);
        let once = norm.try_normalize(&TreePoly::from_tree(u)).map_err(|e| e.to_string())?;
        ensure(once.trees().all(RTree::is_nmne), || format!("non-NMNE output at sample {n}"))?;
        let twice = norm.try_normalize(&once).map_err(|e| e.to_string())?;
        ensure(twice == once, || format!("not idempotent at sample {n}"))?;
    }
    Ok(())
}

fn semantic_agreement() -> Outcome {
    let (vars, ops) = labels(3, 2);
    let mut r = rng(404);
    let mut norm = Normalizer::new();
    let mut sem = SemanticNormalizer::new();
    for n in 0..200 {
        let u = random_small_tree(&mut r, &vars, &ops, 8);
        let p = TreePoly::from_tree(u.clone());
        let nf = norm.try_normalize(&p).map_err(|e| e.to_string())?;
        let mut g = DPoly::zero(PCD);
        for (t, c) in nf.terms() {
            g = g.add(&g_map(t).map_err(|e| e.to_string())?.scale(c)).unwrap();
        }
        ensure(g == eval_tree(&u), || format!("eval differs from g(normalize) at sample {n}"))?;
        let s = sem.normalize(&p).map_err(|e| e.to_string())?;
        ensure(s == nf, || format!("normalizers disagree at sample {n}"))?;
    }
    Ok(())
}

fn basis_theorem() -> Outcome {
    for (nv, no) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
        let (vars, ops) = labels(nv, no);
        for k in 0..=4 {
            let trees = enum_nmne(&vars, &ops, k);
            let monos = enum_populated(&vars, &ops, k);
            ensure(trees.len() == monos.len(), || {
                format!("({nv},{no}) k={k}: {} NMNE vs {} populated", trees.len(), monos.len())
            })?;
            for t in &trees {
                let m = phi(t).map_err(|e| e.to_string())?;
                ensure(psi(&m).as_ref() == Ok(t), || format!("psi(phi(u)) != u at ({nv},{no}) k={k}"))?;
            }
            for m in &monos {
                let t = psi(m).map_err(|e| e.to_string())?;
                ensure(phi(&t).as_ref() == Ok(m), || format!("phi(psi(m)) != m at ({nv},{no}) k={k}"))?;
            }
            if k <= 3 {
                let q = quotient_dim_bruteforce(&vars, &ops, k, DEFAULT_TREE_CAP).map_err(|e| e.to_string())?;
                ensure(q == trees.len(), || {
                    format!("({nv},{no}) k={k}: quotient {q} vs {} NMNE", trees.len())
                })?;
            }
        }
    }
    Ok(())
}

fn worked_example() -> Outcome {
    let tb = declare_symbols(&["a", "b", "c", "d"], &["al", "be", "ga"]).unwrap();
    let u = parse_tree("r(r(r(d,be,d,al,c,ga,c,be;c),be,c,be,b,al;d),ga,a,be;a)", &tb).unwrap();
    let expected =
        parse_mono("d*d*c*c*c*b*a*D[be,al,ga,be](c)*D[be,be,al](d)*D[ga,be](a)", &tb, PCD).unwrap();
    let m = phi(&u).map_err(|e| e.to_string())?;
    ensure(m == expected, || "phi of the reference tree differs".into())?;
    ensure(psi(&m).as_ref() == Ok(&u), || "psi does not invert phi on the reference tree".into())?;

    let tb = declare_symbols(&["x4", "x3", "x2", "x1"], &["w1", "w2", "w3"]).unwrap();
    let m = parse_mono("x1*x2*D[w1,w2](x3)*D[w3](x4)", &tb, PCD).unwrap();
    let t = parse_tree("r(r(x1,w1,x2,w2;x3),w3;x4)", &tb).unwrap();
    ensure(psi(&m).as_ref() == Ok(&t), || "psi of the symbolic example differs".into())
}

fn g_injectivity() -> Outcome {
    let (vars, ops) = labels(2, 2);
    for k in 0..=4 {
        for (v, o) in label_classes(&vars, &ops, k) {
            let trees = enum_nmne_class(&v, &o);
            let images: Vec<DPoly> = trees.iter().map(eval_tree).collect();
            let r = rank(&images);
            ensure(r == trees.len(), || format!("k={k}: rank {r} for a class of {}", trees.len()))?;
        }
    }
    Ok(())
}

fn generation_lemma() -> Outcome {
    let (vars, ops) = labels(2, 2);
    for k in 0..=3 {
        for m in enum_populated(&vars, &ops, k) {
            let g = generate_from_x(&m).map_err(|e| e.to_string())?;
            let target: DPoly = DPoly::mono(PCD, m.clone(), Rat::one());
            ensure(eval_in_pcd(&g) == target, || format!("generation fails at grade {k}: {m:?}"))?;
        }
    }
    Ok(())
}

fn finite_dimensional_fixtures() -> Outcome {
    let m = fixtures::matrices_2x2();
    let ds = [
        fixtures::matrix_ad([[1, 1], [0, 1]]),
        fixtures::matrix_ad([[2, 3], [0, 2]]),
        fixtures::matrix_ad([[0, 5], [0, 0]]),
    ];
    for d in &ds {
        ensure(m.is_derivation(d).unwrap_or(false), || "ad map is not a derivation".into())?;
    }
    for a in &ds {
        for b in &ds {
            ensure(commutes(a, b).unwrap_or(false), || "ad maps do not commute".into())?;
        }
    }
    let fails = identity_failures(&m, &ds, IdentitySystem::Mnca).map_err(|e| e.to_string())?;
    ensure(fails.is_empty(), || format!("{} nonzero residuals, first {:?}", fails.len(), fails[0]))?;

    for (name, a, expected) in [
        ("trivial bracket", fixtures::with_trivial_bracket(&fixtures::truncated_polynomials(3)), true),
        ("2-dim Poisson", fixtures::poisson_2d(), true),
        ("perturbed", fixtures::perturbed_non_poisson(), false),
    ] {
        let c = a.check_poisson().map_err(|e| format!("{name}: {e}"))?;
        let ad = a.all_ad_are_derivations().map_err(|e| format!("{name}: {e}"))?;
        ensure(c.holds == expected && ad == expected, || {
            format!("{name}: poisson {} / ad-derivations {ad}, expected {expected}", c.holds)
        })?;
    }
    Ok(())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("identity suites in all four flavors", identity_suites, Some(Duration::from_secs(10))),
        ("Leibniz rule and (non)commuting derivations", leibniz_and_commutation, None),
        ("normalizer soundness", normalizer_soundness, None),
        ("semantic agreement", semantic_agreement, Some(Duration::from_secs(60))),
        ("basis theorem at desk scale", basis_theorem, Some(Duration::from_secs(60))),
        ("reference phi/psi examples", worked_example, None),
        ("g injectivity per label class", g_injectivity, None),
        ("generation lemma", generation_lemma, None),
        ("finite-dimensional fixtures", finite_dimensional_fixtures, None),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = run();
        let elapsed = start.elapsed();
        if let (Ok(()), Some(limit)) = (&outcome, limit) {
            if elapsed > *limit {
                outcome = Err(format!("took {elapsed:.2?}, target {limit:?}"));
            }
        }
        match outcome {
            Ok(()) => println!("criterion {}: PASS  {name} ({elapsed:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {e} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
