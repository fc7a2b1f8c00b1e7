use std::path::Path;

use diamram::chromatic::{is_proper, Decision, Solver, SolverOptions};
use diamram::constructions::{
    brick, heptagon_config, kahn_kalai, kneser_points, regular_polygon, regular_simplex, theorem5_set, SimplexSpec,
};
use diamram::degeneracy::{anchor_verdict, canonical_tetrahedron, is_t_degenerate_evidence, theorem5_audit, theorem5_witness};
use diamram::diameter::{diameter_graph, diameter_hypergraph};
use diamram::exact::{self, Rational};
use diamram::hypergraph::Hypergraph;
use diamram::ramsey::{
    acute_triangle_witness, almost_regular_embedding, arrows_with, congruent_copies, obtuse_gadget_audit,
    right_triangle_witness, EmbeddingWitness, GadgetConfig, GadgetShape,
};
use diamram::PointSet;
use num::{Signed, Zero};
use serde_json::{json, Value};

use crate::{
    verify, ChromArgs, Command, DegenArgs, Done, EmbedArgs, EmbedMethod, Failure, Family, GadgetArgs, ShapeArg,
    DEFAULT_NODE_BUDGET, SCHEMA,
};

pub(crate) fn dispatch(cmd: Command) -> Result<Done, Failure> {
    match cmd {
        Command::Construct { family } => construct(family),
        Command::Diam { input } => diam(&read_points(&input)?),
        Command::Hyper { input, r } => {
            let h = diameter_hypergraph(&read_points(&input)?, r)?;
            Ok(Done { doc: h.to_json(), ok: true })
        }
        Command::Chrom(args) => chrom(&args),
        Command::Arrow { host, pattern, r } => arrow(&read_points(&host)?, &read_points(&pattern)?, r),
        Command::Embed(args) => embed(&args),
        Command::Gadget(args) => gadget(&args),
        Command::Degen(args) => degen(&args),
        Command::T5Witness { trials, seed } => t5_witness(trials, seed),
        Command::VerifyPaper { suite, seed } => {
            let reports = verify::verify_paper(suite, seed);
            let count = |s: verify::Status| reports.iter().filter(|r| r.status == s).count();
            let failed = count(verify::Status::Fail);
            let doc = json!({
                "schema": SCHEMA,
                "suite": suite,
                "seed": seed,
                "passed": count(verify::Status::Pass),
                "failed": failed,
                "skipped": count(verify::Status::Skip),
                "reports": reports,
            });
            Ok(Done { doc, ok: failed == 0 })
        }
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn read_points(path: &Path) -> Result<PointSet, Failure> {
    PointSet::from_json_str(&read_text(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_hypergraph(path: &Path) -> Result<Hypergraph, Failure> {
    Hypergraph::from_json_str(&read_text(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_rationals(values: &[String]) -> Result<Vec<Rational>, Failure> {
    values.iter().map(|v| exact::parse(v).map_err(Failure::from)).collect()
}

fn construct(family: Family) -> Result<Done, Failure> {
    let p = match family {
        Family::Kk { n } => kahn_kalai(n)?,
        Family::Kneser { n, k, r } => kneser_points(n, k, r)?,
        Family::Simplex { m, side } => regular_simplex(m, side)?,
        Family::Polygon { n, radius } => regular_polygon(n, radius)?,
        Family::Brick { sides } => brick(&parse_rationals(&sides)?)?,
        Family::T5 => theorem5_set(),
        Family::Heptagon { radius, pattern } => {
            let (r, p) = heptagon_config(radius)?;
            if pattern {
                p
            } else {
                r
            }
        }
    };
    Ok(Done { doc: p.to_json(), ok: true })
}

fn diam(p: &PointSet) -> Result<Done, Failure> {
    let d = p.diameter();
    let g = diameter_graph(p)?;
    let doc = json!({
        "schema": SCHEMA,
        "points": p.len(),
        "mode": if p.is_exact() { "exact" } else { "float" },
        "diameter_sq": d.value_sq.to_json(),
        "diameter": d.value,
        "pairs": d.pairs,
        "near_pairs": d.near_pairs,
        "graph": g.to_json(),
    });
    Ok(Done { doc, ok: true })
}

fn chrom(args: &ChromArgs) -> Result<Done, Failure> {
    let h = read_hypergraph(&args.input)?;
    if let Some(e) = h.edges().iter().find(|e| e.len() == 1) {
        return Err(Failure::Input(format!("singleton hyperedge {e:?}: no proper coloring exists")));
    }
    let node_limit = (!args.slow).then_some(DEFAULT_NODE_BUDGET);
    let solver = Solver::new(SolverOptions { node_limit, ..SolverOptions::default() });
    let top = args.max_colors.unwrap_or(h.n_vertices().max(1));
    for k in 0..=top {
        match solver.decide(&h, k) {
            Decision::Colorable(c) => {
                debug_assert!(is_proper(&h, &c));
                let doc = json!({"schema": SCHEMA, "chi": k, "witness": c.colors()});
                return Ok(Done { doc, ok: true });
            }
            Decision::NotColorable => {}
            Decision::Exhausted { nodes } => {
                return Err(Failure::from(diamram::Error::BudgetExhausted(nodes)));
            }
        }
    }
    let doc = json!({"schema": SCHEMA, "colorable": false, "max_colors": top});
    Ok(Done { doc, ok: true })
}

fn arrow(host: &PointSet, pattern: &PointSet, r: usize) -> Result<Done, Failure> {
    let family = congruent_copies(host, pattern);
    let res = arrows_with(&family, r, &Solver::default())?;
    let doc = json!({
        "schema": SCHEMA,
        "r": r,
        "arrows": res.arrows,
        "copies": res.copies,
        "copy_sets": family.copies,
        "evading": res.evading.as_ref().map(|c| c.colors()),
    });
    Ok(Done { doc, ok: true })
}

fn witness_doc(w: &EmbeddingWitness) -> Value {
    let factors: Vec<Value> = w
        .factors
        .iter()
        .map(|f| {
            let n = f.len();
            let sq: Vec<Vec<Value>> = (0..n).map(|i| (0..n).map(|j| f.side_sq.get(i, j).to_json()).collect()).collect();
            json!({"name": f.name, "vertices": n, "side_sq": sq})
        })
        .collect();
    json!({"factors": factors, "embedded": w.embedded, "host_points": w.host_size().to_string()})
}

fn embed(args: &EmbedArgs) -> Result<Done, Failure> {
    let sides = parse_rationals(&args.sides)?;
    if let Some(bad) = sides.iter().find(|s| !s.is_positive()) {
        return Err(Failure::Input(format!("side lengths must be positive; got {}", exact::format(bad))));
    }
    let n = (1..=64).find(|n| n * (n - 1) / 2 == sides.len()).ok_or_else(|| {
        Failure::Input(format!("{} side lengths do not fill the pairs of any simplex", sides.len()))
    })?;
    let triangle = n == 3;
    let method = match args.method {
        EmbedMethod::Auto if triangle => {
            let mut s = sides.clone();
            s.sort();
            if &s[0] * &s[0] + &s[1] * &s[1] == &s[2] * &s[2] {
                EmbedMethod::Right
            } else {
                EmbedMethod::Acute
            }
        }
        EmbedMethod::Auto => EmbedMethod::AlmostRegular,
        m => m,
    };
    if !triangle && method != EmbedMethod::AlmostRegular {
        return Err(Failure::Input(format!("{method:?} needs exactly three sides")));
    }
    let w = match method {
        EmbedMethod::Right => {
            let mut s = sides.clone();
            s.sort();
            if &s[0] * &s[0] + &s[1] * &s[1] != &s[2] * &s[2] {
                return Err(Failure::Input("sides do not form a right triangle".into()));
            }
            right_triangle_witness(&s[0], &s[1], args.colors)?
        }
        EmbedMethod::Acute => acute_triangle_witness(&sides[0], &sides[1], &sides[2])?,
        EmbedMethod::AlmostRegular | EmbedMethod::Auto => {
            let mut m = vec![vec![Rational::zero(); n]; n];
            let mut it = sides.iter();
            for i in 0..n {
                for j in i + 1..n {
                    let v = it.next().expect("count checked above").clone();
                    m[i][j] = v.clone();
                    m[j][i] = v;
                }
            }
            almost_regular_embedding(&SimplexSpec::from_rational_sides(&m)?)?
        }
    };
    let report = w.verify();
    let method_name = match method {
        EmbedMethod::Right => "right",
        EmbedMethod::Acute => "acute",
        _ => "almost_regular",
    };
    let doc = json!({
        "schema": SCHEMA,
        "method": method_name,
        "sides": sides.iter().map(exact::format).collect::<Vec<_>>(),
        "witness": witness_doc(&w),
        "report": report,
        "ok": report.ok,
    });
    Ok(Done { doc, ok: report.ok })
}

fn gadget(args: &GadgetArgs) -> Result<Done, Failure> {
    let mut cfg = GadgetConfig::new(args.k, args.trials, args.seed);
    cfg.dim = args.dim;
    cfg.shape = match args.shape {
        ShapeArg::Legs => GadgetShape::LegsOnePlusXi,
        ShapeArg::ApexHeight => GadgetShape::ApexHeightSqrtXi,
    };
    let rep = obtuse_gadget_audit(&cfg)?;
    let ok = rep.holds;
    let mut doc = serde_json::to_value(&rep).expect("report serializes");
    doc["schema"] = json!(SCHEMA);
    Ok(Done { doc, ok })
}

fn degen(args: &DegenArgs) -> Result<Done, Failure> {
    let p = read_points(&args.input)?;
    let doc = match args.anchor {
        Some(anchor) => {
            let v = anchor_verdict(&p, anchor, args.t, args.margin, args.restarts, args.seed)?;
            json!({
                "schema": SCHEMA,
                "t": args.t,
                "diam": p.diameter().value,
                "margin": args.margin,
                "restarts": args.restarts,
                "seed": args.seed,
                "anchors": [v],
            })
        }
        None => {
            let ev = is_t_degenerate_evidence(&p, args.t, args.margin, args.restarts, args.seed)?;
            let mut doc = serde_json::to_value(&ev).expect("report serializes");
            doc["schema"] = json!(SCHEMA);
            doc["restarts"] = json!(args.restarts);
            doc["seed"] = json!(args.seed);
            doc
        }
    };
    Ok(Done { doc, ok: true })
}

fn t5_witness(trials: usize, seed: u64) -> Result<Done, Failure> {
    let canonical = theorem5_witness(&canonical_tetrahedron())?;
    let audit = theorem5_audit(trials, seed)?;
    let ok = audit.holds && canonical.value < 0.5;
    let doc = json!({
        "schema": SCHEMA,
        "canonical": {"tetrahedron": canonical_tetrahedron(), "witness": canonical},
        "audit": audit,
        "ok": ok,
    });
    Ok(Done { doc, ok })
}
