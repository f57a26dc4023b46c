use std::fs;

use serde_json::{json, Value};

use preclude_core::generators::{gen_family, Family, FamilySpec};
use preclude_core::graph::{bipartition, cartesian_product, Graph};
use preclude_core::io::{parse_edge_list, write_edge_list};
use preclude_core::preclusion::{
    self, applicable_methods, check_product_bound, kfactor_crosscheck, mp, mp_cross_checked,
    mp_hitting_search, mpf_auto, mpf_by, mpf_cross_checked, mpf_product_regular, Method,
};
use preclude_core::rational::display;
use preclude_core::report::{rational_json, report_json};
use preclude_core::verify::{run_verify, VerifyOptions};
use preclude_core::{Error, Limits, PreclusionReport};

use crate::args::{CapArgs, Command, Format, GraphArgs};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(String),
    /// Output was produced, but pipelines disagreed.
    Disagreement(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Compute(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Disagreement(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Compute(m) | Failure::Disagreement(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSpec(_) => Failure::Usage(e.to_string()),
            _ => Failure::Compute(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

pub fn run(command: Command) -> Outcome {
    match command {
        Command::Mpf {
            graph,
            method,
            caps,
            format,
        } => cmd_mpf(&graph, &method, &caps, format),
        Command::Mp {
            graph,
            method,
            caps,
            format,
        } => cmd_mp(&graph, &method, &caps, format),
        Command::Kfactor {
            graph,
            caps,
            format,
        } => cmd_kfactor(&graph, &caps, format),
        Command::Product {
            graph,
            h,
            caps,
            format,
        } => cmd_product(&graph, &h.as_graph_args(), &caps, format),
        Command::Gen { graph, output } => {
            let text = write_edge_list(&load_graph(&graph)?);
            match output {
                Some(path) => {
                    fs::write(&path, &text)
                        .map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
        Command::Verify {
            max_n,
            sample,
            seed,
            caps,
            format,
        } => cmd_verify(max_n, sample, seed, &caps.limits(), format),
    }
}

fn family_params(args: &GraphArgs, family: Family) -> Result<Vec<usize>, Failure> {
    if let Some(p) = &args.params {
        return Ok(p.clone());
    }
    let need = |v: Option<usize>, flag: &str| {
        v.ok_or_else(|| Failure::Usage(format!("family {family} needs --{flag}")))
    };
    Ok(match family {
        Family::Gk => vec![need(args.k, "k")?],
        Family::CompleteBipartite => {
            let n = need(args.n, "n")?;
            vec![n, args.m.unwrap_or(n)]
        }
        Family::Complete
        | Family::Cycle
        | Family::Path
        | Family::Hypercube
        | Family::RandomTree => {
            vec![need(args.n, "n")?]
        }
        Family::RandomRegularBipartite => vec![need(args.n, "n")?, need(args.r, "r")?],
        Family::RandomBipartite => {
            let n = need(args.n, "n")?;
            vec![n, args.m.unwrap_or(n), args.p.unwrap_or(50)]
        }
        Family::RandomConnected => vec![need(args.n, "n")?, args.p.unwrap_or(50)],
    })
}

pub fn load_graph(args: &GraphArgs) -> Result<Graph, Failure> {
    match (&args.input, &args.family) {
        (Some(path), None) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::Compute(format!("{}: {e}", path.display())))?;
            Ok(parse_edge_list(&text)?)
        }
        (None, Some(name)) => {
            let family: Family = name.parse()?;
            let spec = FamilySpec::new(family, family_params(args, family)?, args.seed);
            Ok(gen_family(&spec)?)
        }
        (None, None) => Err(Failure::Usage("give --input or --family".into())),
        (Some(_), Some(_)) => Err(Failure::Usage("--input and --family are exclusive".into())),
    }
}

fn render(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values serialize") + "\n"
}

fn report_text(report: &PreclusionReport, label: &str) -> String {
    let mut out = format!("{label} = {} ({})\n", display(&report.value), report.method);
    if let Some((x, y)) = &report.witness_xy {
        out += &format!("witness X = {x:?}, Y = {y:?}\n");
    }
    if let Some(set) = &report.preclusion_set {
        out += &format!("deleted edges = {set:?}\n");
    }
    for (m, v) in &report.cross_check {
        out += &format!("  {m}: {}\n", display(v));
    }
    out
}

fn disagreement_check(report: &PreclusionReport, text: String) -> Outcome {
    if report.agrees() {
        Ok(text)
    } else {
        Err(Failure::Disagreement(text))
    }
}

fn cmd_mpf(args: &GraphArgs, method: &str, caps: &CapArgs, format: Format) -> Outcome {
    let g = load_graph(args)?;
    let limits = caps.limits();
    let report = match method {
        "auto" => mpf_auto(&g, &limits)?,
        "all" => mpf_cross_checked(&g, &applicable_methods(&g), &limits)?,
        name => {
            let m: Method = name.parse().map_err(Failure::Usage)?;
            if matches!(m, Method::ProductFormula | Method::HittingSearch) {
                return Err(Failure::Usage(format!(
                    "{m} does not compute mp_f of a single graph"
                )));
            }
            if m.requires_bipartite() && bipartition(&g).is_none() {
                return Err(Failure::Usage(format!("{m} needs a bipartite graph")));
            }
            let mut r = mpf_by(&g, m, &limits)?;
            r.cross_check.insert(m, r.value.clone());
            r
        }
    };
    let text = match format {
        Format::Json => render(&report_json(&report)),
        Format::Text => report_text(&report, "mp_f"),
    };
    disagreement_check(&report, text)
}

fn cmd_mp(args: &GraphArgs, method: &str, caps: &CapArgs, format: Format) -> Outcome {
    let g = load_graph(args)?;
    let limits = caps.limits();
    let report = match method {
        "auto" | "all" => mp_cross_checked(&g, &limits)?,
        "enumeration" => mp(&g, &limits)?,
        "hitting_search" => mp_hitting_search(&g)?,
        other => return Err(Failure::Usage(format!("unknown mp method {other:?}"))),
    };
    let text = match format {
        Format::Json => render(&report_json(&report)),
        Format::Text => report_text(&report, "mp"),
    };
    disagreement_check(&report, text)
}

fn cmd_kfactor(args: &GraphArgs, caps: &CapArgs, format: Format) -> Outcome {
    let g = load_graph(args)?;
    let bip =
        bipartition(&g).ok_or_else(|| Failure::Usage("kfactor needs a bipartite graph".into()))?;
    let limits = caps.limits();
    let mpf = preclusion::mpf_bipartite_formula(&g, &bip, &limits)?;
    let check = kfactor_crosscheck(&g, &bip, &limits)?;
    let text = match format {
        Format::Json => render(&json!({
            "mpf": rational_json(&mpf.value),
            "floor_mpf": check.floor_mpf,
            "max_k_factor": check.max_k_factor,
            "agree": check.agree,
        })),
        Format::Text => format!(
            "mp_f = {}\nfloor(mp_f) = {}\nlargest k-factor = {}\nagree = {}\n",
            display(&mpf.value),
            check.floor_mpf,
            check.max_k_factor,
            check.agree
        ),
    };
    if check.agree {
        Ok(text)
    } else {
        Err(Failure::Disagreement(text))
    }
}

fn cmd_product(g_args: &GraphArgs, h_args: &GraphArgs, caps: &CapArgs, format: Format) -> Outcome {
    let g = load_graph(g_args)?;
    let h = load_graph(h_args)?;
    let limits = caps.limits();
    let bip_g = bipartition(&g).ok_or_else(|| Failure::Usage("g must be bipartite".into()))?;
    if bipartition(&h).is_none() {
        return Err(Failure::Usage("h must be bipartite".into()));
    }
    let formula = match mpf_product_regular(&g, &bip_g, &h, &limits) {
        Ok(r) => Some(r),
        Err(Error::UnbalancedSides(..) | Error::NotRegular | Error::NotRegularBipartite) => None,
        Err(e) => return Err(e.into()),
    };
    let prod = cartesian_product(&g, &h).graph;
    let direct = mpf_auto(&prod, &limits)?;
    let bound = check_product_bound(&g, &h, &limits)?;
    let mut agree = direct.agrees() && bound.holds;
    if let Some(f) = &formula {
        agree &= f.agrees() && f.value == direct.value;
    }
    let text = match format {
        Format::Json => {
            let direct_values: serde_json::Map<String, Value> = direct
                .cross_check
                .iter()
                .map(|(m, v)| (m.name().to_string(), rational_json(v)))
                .collect();
            render(&json!({
                "product": {"vertices": prod.vertex_count(), "edges": prod.edge_count()},
                "formula": formula.as_ref().map(report_json),
                "direct": direct_values,
                "bound": {
                    "lhs": rational_json(&bound.lhs),
                    "rhs": rational_json(&bound.rhs),
                    "holds": bound.holds,
                    "equality": bound.equality,
                },
            }))
        }
        Format::Text => {
            let mut out = format!(
                "product: {} vertices, {} edges\n",
                prod.vertex_count(),
                prod.edge_count()
            );
            match &formula {
                Some(f) => out += &report_text(f, "formula"),
                None => out += "formula: not applicable (needs balanced g and regular h)\n",
            }
            out += &report_text(&direct, "direct");
            out += &format!(
                "bound: {} >= {} holds = {}, equality = {}\n",
                display(&bound.lhs),
                display(&bound.rhs),
                bound.holds,
                bound.equality
            );
            out
        }
    };
    if agree {
        Ok(text)
    } else {
        Err(Failure::Disagreement(text))
    }
}

fn cmd_verify(max_n: usize, sample: usize, seed: u64, limits: &Limits, format: Format) -> Outcome {
    if !(2..=12).contains(&max_n) {
        return Err(Failure::Usage("--max-n must be in 2..=12".into()));
    }
    let report = run_verify(&VerifyOptions {
        max_n,
        sample,
        seed,
        limits: *limits,
    });
    let text = match format {
        Format::Json => render(&json!({
            "graphs": report.graphs,
            "bipartite": report.bipartite,
            "passed": report.passed(),
            "findings": report
                .findings
                .iter()
                .map(|f| json!({"graph": f.graph, "message": f.message}))
                .collect::<Vec<_>>(),
        })),
        Format::Text => {
            let mut out = String::new();
            for f in &report.findings {
                out += &format!("FAIL {}: {}\n", f.graph, f.message);
            }
            out += &format!(
                "verified {} graphs ({} bipartite): {}\n",
                report.graphs,
                report.bipartite,
                if report.passed() {
                    "all invariants hold"
                } else {
                    "disagreements found"
                }
            );
            out
        }
    };
    if report.passed() {
        Ok(text)
    } else {
        Err(Failure::Disagreement(text))
    }
}
