use conformal::algebra::{check_conformal_axioms, nth_product, ConformalAlgebra};
use conformal::classifier::{generate_rank1_constraints, ns_rank11_substitution, variety_compare, virasoro_family};
use conformal::element::PolyVec;
use conformal::lie::LieSuperData;
use conformal::module::{
    build_module_family, check_module_axioms, generated_submodule_contains, singular_subspace, submodule_closed,
    Closure, ConformalModule, FamilyParams, Membership, StepOp,
};
use conformal::modes::{
    action_array, bracket_array, check_jacobi_window, check_mode_compatibility, element_mode, expand_module_modes,
    locality_order, mode_bracket, mode_label, ope_extract, render_modes, Locality, ModeVec, Window,
};
use conformal::parse::{parse_element, parse_mode};
use conformal::report::{Location, Report};
use conformal::spec::{load_spec, resolve_algebra, scalar_param, SpecFile};
use conformal::{Error, Result};
use serde_json::json;

use crate::{AlgebraSource, Cli, ClassifyCmd, Command, Global, LocalityArgs, ModesCmd, ModuleSource, OpeArgs, ProbeCmd, VerifyCmd};

const LOCALITY_WINDOW: Window = Window { lo: -6, hi: 10 };
const MODULE_WINDOW: Window = Window { lo: -2, hi: 3 };

pub fn run(cli: &Cli) -> Result<Vec<Report>> {
    let g = &cli.global;
    match &cli.command {
        Command::Verify(VerifyCmd::Algebra(src)) => {
            let alg = algebra(src)?;
            let mut out = vec![check_conformal_axioms(&alg)];
            if let Some(w) = g.window {
                out.push(check_jacobi_window(&alg, w.lo, w.hi));
            }
            Ok(out)
        }
        Command::Verify(VerifyCmd::Module(src)) => {
            let m = module(src, g)?;
            let axioms = check_module_axioms(&m);
            let mut out = Vec::new();
            if axioms.passed() {
                out.push(check_mode_compatibility(&m, g.window.unwrap_or(MODULE_WINDOW)));
            }
            out.insert(0, axioms);
            Ok(out)
        }
        Command::Ope(args) => ope(args, g),
        Command::Locality(args) => locality(args, g),
        Command::Modes(ModesCmd::Bracket { algebra: src, left, right }) => {
            let alg = algebra(src)?;
            let names = alg.names();
            let (i, m) = parse_mode(left, &names)?;
            let (j, n) = parse_mode(right, &names)?;
            let b = mode_bracket(&alg, &ModeVec::mode(i, m), &ModeVec::mode(j, n))?;
            let mut r = Report::new(format!("modes bracket {}", alg.name));
            let line = |phys: bool| {
                format!(
                    "[{}, {}] = {}",
                    mode_label(&alg, i, m, phys),
                    mode_label(&alg, j, n, phys),
                    render_modes(&alg, &b, phys)
                )
            };
            r.set("bracket", json!(line(false)));
            if alg.generators().iter().any(|g| g.weight.is_some()) {
                r.set("physics", json!(line(true)));
            }
            r.set("value", b.to_json(&names, "gen"));
            Ok(vec![r])
        }
        Command::Modes(ModesCmd::Act { module: src, left, right }) => {
            let m = module(src, g)?;
            let mut r = check_mode_compatibility(&m, g.window.unwrap_or(MODULE_WINDOW));
            if let (Some(l), Some(rt)) = (left, right) {
                let (i, mm) = parse_mode(l, &m.algebra().names())?;
                let (b, n) = parse_mode(rt, &m.names()).map_err(|_| Error::UnknownBasis(rt.clone()))?;
                let v = expand_module_modes(&m, &ModeVec::mode(i, mm), &ModeVec::mode(b, n))?;
                let bnames = m.names();
                let rendered = v.render(|k, p| format!("{}_({p})", bnames[k]));
                r.set("action", json!(format!("{}_({mm}) {}_({n}) = {rendered}", m.algebra().names()[i], bnames[b])));
            }
            Ok(vec![r])
        }
        Command::Probe(ProbeCmd::Submodule { module: src, candidates, contains }) => {
            let m = module(src, g)?;
            let names = m.names();
            let cands = candidates
                .iter()
                .map(|c| parse_element(c, &names))
                .collect::<Result<Vec<_>>>()?;
            match contains {
                Some(t) => probe_contains(&m, &cands[0], &parse_element(t, &names)?, g),
                None => probe_closed(&m, &cands),
            }
        }
        Command::Probe(ProbeCmd::Singular { module: src, level }) => {
            let m = module(src, g)?;
            let cap = g.degree_cap.unwrap_or(3);
            let s = singular_subspace(&m, *level, cap)?;
            let names = m.names();
            let mut r = Report::new(format!("probe singular {}", m.name));
            r.note(format!("level N = {level}, degree cap {cap}"));
            r.set("basis", json!(s.basis.iter().map(|v| v.render(&names)).collect::<Vec<_>>()));
            r.set("dimension", json!(s.basis.len()));
            if let Some(ind) = s.independent {
                r.set("independent", json!(ind));
                if !ind {
                    r.push("independence", Location::new(Vec::<String>::new()), json!(null), "∂^j v_i are linearly dependent");
                }
            }
            Ok(vec![r])
        }
        Command::Classify(ClassifyCmd::Rank1 { algebra: name, nmax, deg, branch_report }) => {
            classify(name, *nmax, *deg, *branch_report)
        }
    }
}

fn algebra(src: &AlgebraSource) -> Result<ConformalAlgebra> {
    match (&src.name, &src.file) {
        (Some(n), None) => resolve_algebra(n),
        (None, Some(f)) => match load_spec(f)? {
            SpecFile::Algebra(a) => Ok(a),
            SpecFile::Module(_) => Err(Error::Spec(format!("{f} is a module spec"))),
        },
        _ => Err(Error::Spec("give exactly one of --name or --file".into())),
    }
}

fn family_params(g: &Global, lie: Option<&str>) -> Result<FamilyParams> {
    if let Some((k, _)) = g.params.iter().find(|(k, _)| k != "alpha" && k != "delta") {
        return Err(Error::Spec(format!("unknown parameter {k:?} (alpha, delta)")));
    }
    let mut p = FamilyParams::new();
    p.alpha = scalar_param(&g.params, "alpha");
    p.delta = scalar_param(&g.params, "delta");
    if let Some(name) = lie {
        p.lie = Some(LieSuperData::by_name(name)?);
    }
    Ok(p)
}

fn module_from(family: Option<&str>, file: Option<&str>, lie: Option<&str>, g: &Global) -> Result<ConformalModule> {
    match (family, file) {
        (Some(f), None) => build_module_family(f.parse()?, &family_params(g, lie)?),
        (None, Some(path)) => {
            if !g.params.is_empty() {
                return Err(Error::Spec("--param only applies to builtin families".into()));
            }
            match load_spec(path)? {
                SpecFile::Module(m) => Ok(m),
                SpecFile::Algebra(_) => Err(Error::Spec(format!("{path} is an algebra spec"))),
            }
        }
        _ => Err(Error::Spec("give exactly one of --family or --file".into())),
    }
}

fn module(src: &ModuleSource, g: &Global) -> Result<ConformalModule> {
    module_from(src.family.as_deref(), src.file.as_deref(), src.lie.as_deref(), g)
}

fn split_pair(pair: &str) -> Result<(&str, &str)> {
    pair.split_once(',')
        .ok_or_else(|| Error::Parse(format!("pair must look like L,L, got {pair:?}")))
}

fn parse_j(s: &str) -> Result<Vec<u32>> {
    let bad = || Error::Parse(format!("j must look like 0..4, 0..=3 or 2, got {s:?}"));
    let num = |t: &str| t.trim().parse::<u32>().map_err(|_| bad());
    if let Some((a, b)) = s.split_once("..=") {
        Ok((num(a)?..=num(b)?).collect())
    } else if let Some((a, b)) = s.split_once("..") {
        Ok((num(a)?..num(b)?).collect())
    } else {
        Ok(vec![num(s)?])
    }
}

fn ope(args: &OpeArgs, g: &Global) -> Result<Vec<Report>> {
    let alg = algebra(&args.algebra)?;
    let names = alg.names();
    let (a, b) = split_pair(&args.pair)?;
    let (x, y) = (parse_element(a, &names)?, parse_element(b, &names)?);
    let window = g.window.unwrap_or(LOCALITY_WINDOW);
    let arr = bracket_array(&alg, &x, &y, window)?;
    let mut r = Report::new(format!("ope ({}, {}) {}", arr.left, arr.right, alg.name));
    for j in parse_j(&args.j)? {
        let (reliable, modes) = ope_extract(&arr, j)?;
        let table = nth_product(&alg, &x, &y, j)?;
        r.note(format!("j = {j}: reliable window: {reliable}"));
        let mut lines = Vec::new();
        for (n, v) in &modes {
            let want = element_mode(&table, *n);
            if *v != want {
                let loc = Location::new([arr.left.clone(), arr.right.clone()])
                    .with("j", j as i64)
                    .with("n", *n);
                let diff = v.sub(&want);
                r.push("ope", loc, diff.to_json(&names, "gen"), render_modes(&alg, &diff, false));
            }
            lines.push(format!("n={n}: {}", render_modes(&alg, v, false)));
        }
        r.set(&format!("j={j} table"), json!(table.render(&names)));
        r.set(&format!("j={j} modes"), json!(lines));
    }
    Ok(vec![r])
}

fn locality(args: &LocalityArgs, g: &Global) -> Result<Vec<Report>> {
    let window = g.window.unwrap_or(LOCALITY_WINDOW);
    let (a, b) = split_pair(&args.pair)?;
    let arr = if args.family.is_some() || args.module.is_some() {
        let m = module_from(args.family.as_deref(), args.module.as_deref(), args.lie.as_deref(), g)?;
        let x = parse_element(a, &m.algebra().names())?;
        let v = parse_element(b, &m.names())?;
        action_array(&m, &x, &v, window)?
    } else {
        let alg = resolve_algebra(&args.algebra)?;
        let names = alg.names();
        bracket_array(&alg, &parse_element(a, &names)?, &parse_element(b, &names)?, window)?
    };
    let mut r = Report::new(format!("locality ({}, {})", arr.left, arr.right));
    match locality_order(&arr) {
        Locality::Order { order, reliable } => {
            r.set("order", json!(order));
            r.note(format!("reliable window: {reliable}"));
        }
        Locality::ExceedsWindow { tested } => {
            return Err(Error::WindowTooSmall(format!("no locality order up to {tested} fits in {window}")));
        }
    }
    Ok(vec![r])
}

fn probe_closed(m: &ConformalModule, cands: &[PolyVec]) -> Result<Vec<Report>> {
    let names = m.names();
    let mut r = Report::new(format!("probe submodule {}", m.name));
    r.set("candidates", json!(cands.iter().map(|c| c.render(&names)).collect::<Vec<_>>()));
    match submodule_closed(m, cands)? {
        Closure::Closed { basis } => {
            let rendered: Vec<String> = basis.iter().map(|v| v.render(&names)).collect();
            r.push(
                "reducible",
                Location::new(rendered.clone()),
                json!(rendered),
                format!("closed: reducible certificate, C[∂]-basis {{{}}}", rendered.join(", ")),
            );
        }
        Closure::Open { generator, n, source, image, remainder } => {
            r.set(
                "open",
                json!(format!(
                    "{generator}_({n}) {} = {} leaves the span (remainder {})",
                    cands[source].render(&names),
                    image.render(&names),
                    remainder.render(&names)
                )),
            );
        }
    }
    Ok(vec![r])
}

fn probe_contains(m: &ConformalModule, w: &PolyVec, target: &PolyVec, g: &Global) -> Result<Vec<Report>> {
    let names = m.names();
    let cap = g
        .degree_cap
        .unwrap_or_else(|| conformal::module::default_degree_cap(m, w).max(target.degree().unwrap_or(0)));
    let mut r = Report::new(format!("probe generated {}", m.name));
    r.note(format!("degree cap {cap}"));
    r.set("generator", json!(w.render(&names)));
    r.set("target", json!(target.render(&names)));
    match generated_submodule_contains(m, w, target, cap)? {
        Membership::Yes { steps, combination } => {
            let lines: Vec<String> = steps
                .iter()
                .map(|s| {
                    let op = match &s.op {
                        StepOp::Act { generator, n } => format!("{generator}_({n})"),
                        StepOp::Derive => "∂".to_string(),
                    };
                    format!("#{} = {op} #{} = {}", s.id, s.source, s.result.render(&names))
                })
                .collect();
            r.set("steps", json!(lines));
            let combo: Vec<String> = combination.iter().map(|(id, c)| format!("{c}·#{id}")).collect();
            r.set("combination", json!(combo.join(" + ")));
        }
        Membership::NoWitnessUpToCap { cap, dimension } => {
            r.push(
                "no witness",
                Location::new([target.render(&names)]),
                json!({"cap": cap, "dimension": dimension}),
                format!("target not reached up to degree {cap} (span dimension {dimension}); inconclusive"),
            );
        }
    }
    Ok(vec![r])
}

fn classify(name: &str, nmax: u32, deg: usize, branch_report: bool) -> Result<Vec<Report>> {
    let alg = resolve_algebra(name)?;
    match alg.name.as_str() {
        "virasoro" => {
            if nmax == 0 {
                return Err(Error::Spec("--nmax must be at least 1".into()));
            }
            if deg == 0 {
                return Err(Error::Spec("--deg must be at least 1".into()));
            }
            let sys = generate_rank1_constraints(&alg, nmax, deg);
            let fam = virasoro_family(&sys)?;
            let v = variety_compare(&sys, &fam);
            let mut r = Report::new(format!("classify rank1 {} nmax={nmax} deg={deg}", alg.name));
            let full = v.to_json(&sys, branch_report);
            for key in ["verdict", "unknowns", "groebner_basis", "split_forced", "used_radical", "branches"] {
                if let Some(val) = full.get(key) {
                    r.set(key, val.clone());
                }
            }
            r.set("constraints", json!(sys.polys.len()));
            r.set(
                "family",
                json!(format!(
                    "{}: {}",
                    fam.name,
                    sys.names()
                        .iter()
                        .zip(&fam.assignment)
                        .filter(|(_, p)| !p.is_zero())
                        .map(|(n, p)| format!("{n} = {}", p.render(&fam.params)))
                        .collect::<Vec<_>>()
                        .join(", ")
                )),
            );
            if !v.matched {
                for (k, val) in &v.substitution_failures {
                    let p = &sys.provenance[*k];
                    let loc = Location::new([p.left.clone(), p.right.clone(), p.basis.clone()])
                        .with("m", p.m as i64)
                        .with("n", p.n as i64);
                    r.push("substitution", loc, json!(val), format!("family gives {val}"));
                }
                if v.substitution_failures.is_empty() {
                    r.push("branches", Location::new(Vec::<String>::new()), json!(null), "a branch is not forced");
                }
            }
            Ok(vec![r])
        }
        "neveu_schwarz" => {
            let (sys, fam, failures) = ns_rank11_substitution(nmax, deg)?;
            let mut r = Report::new(format!("classify rank1|1 {} nmax={nmax} deg={deg} (experimental)", alg.name));
            r.note("experimental: only family ⊆ variety is checked");
            r.set("unknowns", json!(sys.nvars()));
            r.set("constraints", json!(sys.polys.len()));
            r.set("family", json!(fam.name));
            for (k, val) in failures {
                let p = &sys.provenance[k];
                let loc = Location::new([p.left.clone(), p.right.clone(), p.basis.clone()])
                    .with("m", p.m as i64)
                    .with("n", p.n as i64);
                r.push("substitution", loc, json!(val), format!("family gives {val}"));
            }
            Ok(vec![r])
        }
        other => Err(Error::Unsupported(format!("rank-1 classification for {other}"))),
    }
}
