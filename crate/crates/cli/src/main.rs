use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mnov_core::diffalg::{check_identity_suite, DMono, DPoly, Flavor};
use mnov_core::enumeration::{enum_nmne, enum_populated, graded_dims, quotient_dim_bruteforce, DEFAULT_TREE_CAP};
use mnov_core::findim::{commutes, identity_failures, parse_algebra, LinMap};
use mnov_core::maps::{eval_in_pcd, generate_from_x, phi, psi, SemanticNormalizer, PCD};
use mnov_core::sample::{random_poly, random_tree, rng};
use mnov_core::symbol::declare_symbols;
use mnov_core::syntax::{
    format_mono, format_poly, format_tree, format_treepoly, parse_mono, parse_tree, parse_treepoly,
};
use mnov_core::treealg::{Normalizer, RTree, TreePoly};
use mnov_core::{Error, Op, Rat, SymbolTable, Var};

const DEFAULT_SEED: u64 = 20240101;

#[derive(Parser)]
#[command(name = "mnov", version, about = "Free multi-Novikov algebras: normal forms, bijections and oracles")]
struct Cli {
    /// Vertex variables, comma separated, in ascending order.
    #[arg(long, global = true, value_delimiter = ',', default_value = "a,b,c")]
    vars: Vec<String>,
    /// Edge operators, comma separated, in ascending order.
    #[arg(long, global = true, value_delimiter = ',', default_value = "w,t")]
    ops: Vec<String>,
    /// Flavor code (multiplication then derivations): cc, cn, nc or nn.
    #[arg(long, global = true)]
    flavor: Option<Flavor>,
    #[arg(long, global = true)]
    grade: Option<usize>,
    #[arg(long = "max-grade", global = true)]
    max_grade: Option<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rewrite a tree polynomial into its NMNE normal form.
    Normalize {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Evaluate a tree polynomial in the free differential algebra (cn flavor).
    Eval {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Map an NMNE tree to its populated monomial.
    Phi { tree: String },
    /// Map a populated monomial to its NMNE tree.
    Psi { mono: String },
    /// Express a populated monomial as an image of trees.
    Generate { mono: String },
    /// List the NMNE trees or populated monomials of one grade.
    Basis { kind: BasisKind },
    /// Tabulate NMNE and populated counts per grade.
    Dims {
        /// Also compute the brute-force quotient dimension.
        #[arg(long)]
        quotient: bool,
    },
    /// Dimension of one graded piece of the quotient of the free algebra.
    QuotientDim,
    /// Check the identity system of a flavor on seeded random elements.
    CheckIdentities {
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Compare the rewriting and semantic normalizers.
    OracleCompare {
        #[arg(allow_hyphen_values = true)]
        expr: Option<String>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long = "max-nodes", default_value_t = 8)]
        max_nodes: usize,
    },
    /// Finite-dimensional algebra checks.
    Findim {
        #[command(subcommand)]
        action: FindimAction,
    },
}

#[derive(Subcommand)]
enum FindimAction {
    /// Verify derivations, identities and the Poisson condition for an algebra file.
    Check { file: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisKind {
    Nmne,
    Populated,
}

/// Failures are either bad input (exit 1) or an internal inconsistency (exit 2).
enum Failure {
    User(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        if e.is_internal() {
            Failure::Internal(e.to_string())
        } else {
            Failure::User(e.to_string())
        }
    }
}

type Outcome = Result<String, Failure>;

fn coeff_json(c: &Rat) -> Value {
    Value::String(format!("{}/{}", c.numer(), c.denom()))
}

fn tree_json(t: &RTree, tab: &SymbolTable) -> Value {
    match t {
        RTree::Leaf(x) => Value::String(tab.var_name(*x).to_owned()),
        RTree::Node { children, root } => {
            let mut items: Vec<Value> = Vec::with_capacity(2 * children.len() + 1);
            for (c, w) in children {
                items.push(tree_json(c, tab));
                items.push(Value::String(tab.op_name(*w).to_owned()));
            }
            items.push(Value::String(tab.var_name(*root).to_owned()));
            Value::Array(items)
        }
    }
}

fn mono_json(m: &DMono, tab: &SymbolTable) -> Value {
    m.factors()
        .iter()
        .map(|d| json!({ "ops": d.word.iter().map(|o| tab.op_name(*o)).collect::<Vec<_>>(), "var": tab.var_name(d.var) }))
        .collect()
}

fn treepoly_json(p: &TreePoly, tab: &SymbolTable) -> Value {
    p.terms().map(|(t, c)| json!({ "coeff": coeff_json(c), "tree": tree_json(t, tab) })).collect()
}

fn poly_json(p: &DPoly, tab: &SymbolTable) -> Value {
    p.terms().map(|(m, c)| json!({ "coeff": coeff_json(c), "mono": mono_json(m, tab) })).collect()
}

struct Ctx {
    tab: SymbolTable,
    vars: Vec<Var>,
    ops: Vec<Op>,
    json: bool,
}

impl Ctx {
    fn emit(&self, text: String, value: Value) -> String {
        if self.json {
            value.to_string()
        } else {
            text
        }
    }
}

fn pcd_only(flavor: Option<Flavor>) -> Result<(), Failure> {
    match flavor {
        Some(f) if f != PCD => Err(Failure::User(format!(
            "this command works in the {} flavor, not {}",
            PCD.code(),
            f.code()
        ))),
        _ => Ok(()),
    }
}

fn need(v: Option<usize>, flag: &str) -> Result<usize, Failure> {
    v.ok_or_else(|| Failure::User(format!("--{flag} is required")))
}

fn run(cli: Cli) -> Outcome {
    let tab = declare_symbols(&cli.vars, &cli.ops)?;
    let ctx = Ctx { vars: tab.vars().collect(), ops: tab.ops().collect(), tab, json: cli.json };
    let tab = &ctx.tab;
    match cli.command {
        Command::Normalize { expr } => {
            let p = parse_treepoly(&expr, tab)?;
            let n = Normalizer::new().try_normalize(&p)?;
            Ok(ctx.emit(format_treepoly(&n, tab), treepoly_json(&n, tab)))
        }
        Command::Eval { expr } => {
            pcd_only(cli.flavor)?;
            let p = eval_in_pcd(&parse_treepoly(&expr, tab)?);
            Ok(ctx.emit(format_poly(&p, tab), poly_json(&p, tab)))
        }
        Command::Phi { tree } => {
            pcd_only(cli.flavor)?;
            let m = phi(&parse_tree(&tree, tab)?)?;
            Ok(ctx.emit(format_mono(&m, tab), mono_json(&m, tab)))
        }
        Command::Psi { mono } => {
            pcd_only(cli.flavor)?;
            let t = psi(&parse_mono(&mono, tab, PCD)?)?;
            Ok(ctx.emit(format_tree(&t, tab), tree_json(&t, tab)))
        }
        Command::Generate { mono } => {
            pcd_only(cli.flavor)?;
            let p = generate_from_x(&parse_mono(&mono, tab, PCD)?)?;
            Ok(ctx.emit(format_treepoly(&p, tab), treepoly_json(&p, tab)))
        }
        Command::Basis { kind } => {
            let k = need(cli.grade, "grade")?;
            Ok(match kind {
                BasisKind::Nmne => {
                    let ts = enum_nmne(&ctx.vars, &ctx.ops, k);
                    ctx.emit(
                        ts.iter().map(|t| format_tree(t, tab)).collect::<Vec<_>>().join("\n"),
                        ts.iter().map(|t| tree_json(t, tab)).collect(),
                    )
                }
                BasisKind::Populated => {
                    let ms = enum_populated(&ctx.vars, &ctx.ops, k);
                    ctx.emit(
                        ms.iter().map(|m| format_mono(m, tab)).collect::<Vec<_>>().join("\n"),
                        ms.iter().map(|m| mono_json(m, tab)).collect(),
                    )
                }
            })
        }
        Command::Dims { quotient } => {
            let max = need(cli.max_grade, "max-grade")?;
            let mut lines = vec![if quotient { "grade nmne populated quotient" } else { "grade nmne populated" }.to_owned()];
            let mut records = Vec::new();
            for d in graded_dims(&ctx.vars, &ctx.ops, max) {
                let mut rec = json!({ "grade": d.grade, "nmne": d.nmne, "populated": d.populated });
                let mut line = format!("{} {} {}", d.grade, d.nmne, d.populated);
                if quotient {
                    let q = quotient_dim_bruteforce(&ctx.vars, &ctx.ops, d.grade, DEFAULT_TREE_CAP)?;
                    rec["quotient"] = json!(q);
                    line.push_str(&format!(" {q}"));
                }
                lines.push(line);
                records.push(rec);
            }
            Ok(ctx.emit(lines.join("\n"), Value::Array(records)))
        }
        Command::QuotientDim => {
            let k = need(cli.grade, "grade")?;
            let q = quotient_dim_bruteforce(&ctx.vars, &ctx.ops, k, DEFAULT_TREE_CAP)?;
            Ok(ctx.emit(q.to_string(), json!({ "grade": k, "quotient": q })))
        }
        Command::CheckIdentities { samples } => check_identities(&ctx, cli.flavor.unwrap_or(PCD), cli.seed, samples),
        Command::OracleCompare { expr, samples, max_nodes } => oracle_compare(&ctx, expr, cli.seed, samples, max_nodes),
        Command::Findim { action: FindimAction::Check { file } } => findim_check(&ctx, &file),
    }
}

fn check_identities(ctx: &Ctx, fl: Flavor, seed: u64, samples: usize) -> Outcome {
    let names = fl.identity_system().names();
    let mut failures = vec![0usize; names.len()];
    let mut r = rng(seed);
    for _ in 0..samples {
        let [x, y, z] = [(); 3].map(|_| random_poly(&mut r, fl, &ctx.vars, &ctx.ops, 3, 2, 3));
        for &w in &ctx.ops {
            for &t in &ctx.ops {
                for (i, res) in check_identity_suite(fl, &x, &y, &z, w, t)?.iter().enumerate() {
                    if !res.is_zero() {
                        failures[i] += 1;
                    }
                }
            }
        }
    }
    let text = names
        .iter()
        .zip(&failures)
        .map(|(n, f)| format!("{n}: {}", if *f == 0 { "ok".to_owned() } else { format!("{f} nonzero residuals") }))
        .collect::<Vec<_>>()
        .join("\n");
    let value = json!({
        "flavor": fl.code(),
        "samples": samples,
        "seed": seed,
        "identities": names.iter().zip(&failures).map(|(n, f)| json!({ "name": n, "failures": f })).collect::<Vec<_>>(),
    });
    let out = ctx.emit(format!("flavor {} ({})\n{text}", fl.code(), fl.identity_system()), value);
    if failures.iter().any(|f| *f > 0) {
        Err(Failure::Internal(out))
    } else {
        Ok(out)
    }
}

fn oracle_compare(ctx: &Ctx, expr: Option<String>, seed: u64, samples: usize, max_nodes: usize) -> Outcome {
    if max_nodes == 0 {
        return Err(Failure::User("--max-nodes must be positive".into()));
    }
    let mut inputs: Vec<TreePoly> = Vec::new();
    if let Some(e) = expr {
        inputs.push(parse_treepoly(&e, &ctx.tab)?);
    }
    let mut r = rng(seed);
    for _ in 0..samples {
        let n = rand_nodes(&mut r, max_nodes);
        inputs.push(TreePoly::from_tree(random_tree(&mut r, &ctx.vars, &ctx.ops, n)));
    }
    let mut rewrite = Normalizer::new();
    let mut semantic = SemanticNormalizer::new();
    for p in &inputs {
        let a = rewrite.try_normalize(p)?;
        let b = semantic.normalize(p)?;
        if a != b {
            let tab = &ctx.tab;
            return Err(Failure::Internal(format!(
                "normalizers disagree on {}\n  rewriting: {}\n  semantic:  {}",
                format_treepoly(p, tab),
                format_treepoly(&a, tab),
                format_treepoly(&b, tab)
            )));
        }
    }
    Ok(ctx.emit(
        format!("{} inputs agree", inputs.len()),
        json!({ "inputs": inputs.len(), "seed": seed, "agree": true }),
    ))
}

fn rand_nodes(r: &mut mnov_core::sample::SampleRng, max_nodes: usize) -> usize {
    use rand::Rng;
    r.gen_range(1..=max_nodes)
}

fn findim_check(ctx: &Ctx, file: &str) -> Outcome {
    let text = fs::read_to_string(file).map_err(|e| Failure::User(format!("{file}: {e}")))?;
    let alg = parse_algebra(&text)?;
    let mut lines = vec![format!("dimension {}", alg.dim)];
    let mut rec = json!({ "dim": alg.dim });

    let assoc = alg.associativity_witness();
    let comm = alg.is_commutative();
    lines.push(match assoc {
        None => "associative: yes".to_owned(),
        Some((i, j, k)) => format!("associative: no (e{i} e{j} e{k})"),
    });
    lines.push(match comm {
        None => "commutative: yes".to_owned(),
        Some((i, j)) => format!("commutative: no (e{i} e{j})"),
    });
    rec["associative"] = json!(assoc.is_none());
    rec["commutative"] = json!(comm.is_none());

    let mut derivs: Vec<(&str, &LinMap)> = Vec::new();
    let mut map_recs = Vec::new();
    for (name, d) in &alg.maps {
        let w = alg.derivation_witness(d)?;
        lines.push(match w {
            None => format!("{name}: derivation"),
            Some((i, j)) => format!("{name}: not a derivation (e{i} e{j})"),
        });
        map_recs.push(json!({ "name": name, "derivation": w.is_none() }));
        if w.is_none() {
            derivs.push((name, d));
        }
    }
    rec["maps"] = Value::Array(map_recs);

    let mut all_commute = true;
    for (i, (n1, d1)) in derivs.iter().enumerate() {
        for (n2, d2) in &derivs[i + 1..] {
            if !commutes(d1, d2)? {
                all_commute = false;
                lines.push(format!("{n1} and {n2} do not commute"));
            }
        }
    }
    rec["derivations_commute"] = json!(all_commute);

    let mut internal = false;
    if assoc.is_none() && !derivs.is_empty() {
        let fl: Flavor = match (comm.is_none(), all_commute) {
            (true, true) => Flavor::CMDCA,
            (true, false) => Flavor::NCMDCA,
            (false, true) => Flavor::CMDNCA,
            (false, false) => Flavor::NCMDNCA,
        };
        let sys = fl.identity_system();
        let maps: Vec<LinMap> = derivs.iter().map(|(_, d)| (*d).clone()).collect();
        let fails = identity_failures(&alg, &maps, sys)?;
        internal = !fails.is_empty();
        lines.push(format!("identities {sys}: {}", if fails.is_empty() { "ok".to_owned() } else { format!("{} failures", fails.len()) }));
        for f in fails.iter().take(5) {
            let (i, j, k) = f.basis;
            let (a, b) = f.labels;
            lines.push(format!("  {} at (e{i}, e{j}, e{k}) with ({}, {})", f.identity, derivs[a].0, derivs[b].0));
        }
        rec["identities"] = json!({ "system": sys.to_string(), "failures": fails.len() });
    }

    if alg.bracket.is_some() {
        match alg.check_poisson() {
            Ok(p) => {
                lines.push(match p.witness {
                    None => "poisson: yes".to_owned(),
                    Some((i, j, k)) => format!("poisson: no (e{i}, e{j} e{k})"),
                });
                let ad_ok = alg.all_ad_are_derivations()?;
                lines.push(format!("every ad is a derivation: {}", if ad_ok { "yes" } else { "no" }));
                if ad_ok != p.holds {
                    internal = true;
                }
                rec["poisson"] = json!(p.holds);
                rec["ad_derivations"] = json!(ad_ok);
            }
            Err(e) if !e.is_internal() => {
                lines.push(format!("poisson: not applicable ({e})"));
                rec["poisson"] = Value::Null;
            }
            Err(e) => return Err(e.into()),
        }
    }

    let out = ctx.emit(lines.join("\n"), rec);
    if internal {
        Err(Failure::Internal(out))
    } else {
        Ok(out)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            println!("{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::User(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal inconsistency: {msg}");
            ExitCode::from(2)
        }
    }
}
