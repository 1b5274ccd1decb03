//! Spec-file driven front end: parse tower descriptions, run the
//! check/basis/verify/reduce/pipeline/disjoint flows, and emit deterministic
//! plain-text reports.
//!
//! Exit codes: 0 = verified, 1 = hypothesis rejected (named), 2 =
//! verification failure (a mathematical contradiction: bug or violated
//! assumption); parse and I/O problems are reported by the binary as 3.

use crate::closure::{
    self, build_v_basis, extend_by_unit_degrees, render_extended_line, ClosureElement,
    ClosureReport, VBasis, WitnessReport,
};
use crate::oracle;
use crate::ring::{self, BasePoly, Monomial, ParseError, VarSet};
use crate::tower::{make_tower, ExpVec, RadicandSpec, TowerCtx, TowerElement, TowerSpec};
use crate::transforms::{self, check_linear_disjointness, small_cm_pipeline, PipelineReport};
use num_bigint::BigInt;
use std::fmt::Write as _;
use std::sync::Arc;

/// One radicand entry of a spec file.
#[derive(Debug, Clone)]
pub struct SpecRadicand {
    pub f: BasePoly,
    pub n: u32,
    /// User-asserted factorization `f = prod q^c` for the pipeline flow.
    pub factors: Vec<(BasePoly, u32)>,
}

/// Parsed spec file. Unknown keys are rejected at parse time.
#[derive(Debug, Clone)]
pub struct SpecFile {
    pub p: u32,
    pub vars: Arc<VarSet>,
    pub radicands: Vec<SpecRadicand>,
    pub disjoint: Vec<BasePoly>,
    pub k_candidates: Option<Vec<u32>>,
    pub seed: Option<u64>,
    pub samples: Option<u32>,
}

impl SpecFile {
    pub fn to_tower_spec(&self) -> TowerSpec {
        TowerSpec {
            p: self.p,
            radicands: self
                .radicands
                .iter()
                .map(|r| RadicandSpec::new(r.f.clone(), r.n / self.p))
                .collect(),
            disjoint_block: self.disjoint.clone(),
        }
    }
}

fn err_at(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        col: 1,
        message: message.into(),
    }
}

fn reserved_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some('w') | Some('z') | Some('u') => {}
        _ => return false,
    }
    let rest: String = chars.collect();
    !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit())
}

/// Strip a `#` comment that is not inside a quoted string.
fn strip_comment(line: &str) -> &str {
    let mut in_quote = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quote = !in_quote,
            '#' if !in_quote => return &line[..i],
            _ => {}
        }
    }
    line
}

/// Split a block body on top-level commas, respecting quotes.
fn split_fields(body: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut in_quote = false;
    for c in body.chars() {
        match c {
            '"' => {
                in_quote = !in_quote;
                cur.push(c);
            }
            ',' if !in_quote => {
                out.push(cur.trim().to_string());
                cur = String::new();
            }
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

struct RawLine {
    line_no: usize,
    key: String,
    /// Scalar value text, or block body for `key { .. }` lines.
    value: String,
    is_block: bool,
}

fn raw_lines(text: &str) -> Result<Vec<RawLine>, ParseError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(raw).trim();
        if line.is_empty() {
            continue;
        }
        if let Some(brace) = line.find('{') {
            let key = line[..brace].trim().to_string();
            if !line.ends_with('}') {
                return Err(err_at(line_no, "block must close with `}` on the same line"));
            }
            let body = &line[brace + 1..line.len() - 1];
            if key.is_empty() {
                return Err(err_at(line_no, "missing key before `{`"));
            }
            out.push(RawLine {
                line_no,
                key,
                value: body.to_string(),
                is_block: true,
            });
        } else if let Some(eq) = line.find('=') {
            let key = line[..eq].trim().to_string();
            let value = line[eq + 1..].trim().to_string();
            if key.is_empty() {
                return Err(err_at(line_no, "missing key before `=`"));
            }
            out.push(RawLine {
                line_no,
                key,
                value,
                is_block: false,
            });
        } else {
            return Err(err_at(
                line_no,
                format!("expected `key = value` or `key {{ .. }}`, found {line:?}"),
            ));
        }
    }
    Ok(out)
}

fn parse_u32(s: &str, line: usize, what: &str) -> Result<u32, ParseError> {
    s.trim()
        .parse()
        .map_err(|_| err_at(line, format!("{what} must be a nonnegative integer, found {s:?}")))
}

fn unquote(s: &str, line: usize, what: &str) -> Result<String, ParseError> {
    let t = s.trim();
    if t.len() >= 2 && t.starts_with('"') && t.ends_with('"') {
        Ok(t[1..t.len() - 1].to_string())
    } else {
        Err(err_at(line, format!("{what} must be a quoted string")))
    }
}

fn block_fields(
    body: &str,
    line: usize,
    allowed: &[&str],
) -> Result<Vec<(String, String)>, ParseError> {
    let mut out = Vec::new();
    for field in split_fields(body) {
        let Some(eq) = field.find('=') else {
            return Err(err_at(line, format!("expected `key = value` inside block, found {field:?}")));
        };
        let key = field[..eq].trim().to_string();
        let value = field[eq + 1..].trim().to_string();
        if !allowed.contains(&key.as_str()) {
            return Err(err_at(line, format!("unknown block key `{key}`")));
        }
        out.push((key, value));
    }
    Ok(out)
}

fn get_field<'a>(
    fields: &'a [(String, String)],
    name: &str,
    line: usize,
) -> Result<&'a str, ParseError> {
    fields
        .iter()
        .find(|(k, _)| k == name)
        .map(|(_, v)| v.as_str())
        .ok_or_else(|| err_at(line, format!("missing `{name}` in block")))
}

/// Parse a spec file. The `p` and `vars` keys must appear before the first
/// polynomial; every hypothesis that is checkable without building the tower
/// (primality of p, degree shape of n, variable names) is checked here.
pub fn parse_spec(text: &str) -> Result<SpecFile, ParseError> {
    let lines = raw_lines(text)?;

    let mut p: Option<(u32, usize)> = None;
    let mut vars: Option<Arc<VarSet>> = None;
    let mut radicands: Vec<SpecRadicand> = Vec::new();
    let mut factors: Vec<(usize, usize, BasePoly, u32)> = Vec::new(); // line, radicand idx, q, c
    let mut disjoint: Vec<BasePoly> = Vec::new();
    let mut k_candidates: Option<Vec<u32>> = None;
    let mut seed: Option<u64> = None;
    let mut samples: Option<u32> = None;

    for l in &lines {
        match (l.key.as_str(), l.is_block) {
            ("p", false) => {
                if p.is_some() {
                    return Err(err_at(l.line_no, "duplicate key `p`"));
                }
                let v = parse_u32(&l.value, l.line_no, "p")?;
                p = Some((v, l.line_no));
            }
            ("vars", false) => {
                if vars.is_some() {
                    return Err(err_at(l.line_no, "duplicate key `vars`"));
                }
                let names: Vec<String> = l
                    .value
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                if names.is_empty() {
                    return Err(err_at(l.line_no, "vars must list at least one variable"));
                }
                for n in &names {
                    if !ring::is_identifier(n) {
                        return Err(err_at(l.line_no, format!("invalid variable name {n:?}")));
                    }
                    if reserved_name(n) {
                        return Err(err_at(
                            l.line_no,
                            format!("variable name {n:?} is reserved for tower generators"),
                        ));
                    }
                }
                for i in 1..names.len() {
                    if names[..i].contains(&names[i]) {
                        return Err(err_at(l.line_no, format!("duplicate variable {:?}", names[i])));
                    }
                }
                vars = Some(VarSet::new(names));
            }
            ("k_candidates", false) => {
                if k_candidates.is_some() {
                    return Err(err_at(l.line_no, "duplicate key `k_candidates`"));
                }
                let mut ks = Vec::new();
                for part in l.value.split(',') {
                    let k = parse_u32(part, l.line_no, "k candidate")?;
                    if k == 0 {
                        return Err(err_at(l.line_no, "k candidates must be positive"));
                    }
                    ks.push(k);
                }
                if ks.is_empty() {
                    return Err(err_at(l.line_no, "k_candidates must be nonempty"));
                }
                k_candidates = Some(ks);
            }
            ("seed", false) => {
                if seed.is_some() {
                    return Err(err_at(l.line_no, "duplicate key `seed`"));
                }
                seed = Some(l.value.trim().parse().map_err(|_| {
                    err_at(l.line_no, format!("seed must be an unsigned integer, found {:?}", l.value))
                })?);
            }
            ("samples", false) => {
                if samples.is_some() {
                    return Err(err_at(l.line_no, "duplicate key `samples`"));
                }
                samples = Some(parse_u32(&l.value, l.line_no, "samples")?);
            }
            ("radicand", true) => {
                let (pv, _) = p.ok_or_else(|| err_at(l.line_no, "`p` must be set before radicands"))?;
                let vs = vars
                    .as_ref()
                    .ok_or_else(|| err_at(l.line_no, "`vars` must be set before radicands"))?;
                let fields = block_fields(&l.value, l.line_no, &["f", "n"])?;
                let f_text = unquote(get_field(&fields, "f", l.line_no)?, l.line_no, "f")?;
                let f = ring::parse_poly(vs, &f_text)
                    .map_err(|e| e.offset(l.line_no, 1))?;
                let n = parse_u32(get_field(&fields, "n", l.line_no)?, l.line_no, "n")?;
                if n == 0 || n % pv != 0 {
                    return Err(err_at(l.line_no, format!("radicand degree n = {n}: p must divide n")));
                }
                if (n / pv) % pv == 0 {
                    return Err(err_at(l.line_no, format!("radicand degree n = {n}: p^2 divides n")));
                }
                radicands.push(SpecRadicand {
                    f,
                    n,
                    factors: Vec::new(),
                });
            }
            ("disjoint", true) => {
                let vs = vars
                    .as_ref()
                    .ok_or_else(|| err_at(l.line_no, "`vars` must be set before disjoint blocks"))?;
                let fields = block_fields(&l.value, l.line_no, &["g"])?;
                let g_text = unquote(get_field(&fields, "g", l.line_no)?, l.line_no, "g")?;
                let g = ring::parse_poly(vs, &g_text)
                    .map_err(|e| e.offset(l.line_no, 1))?;
                disjoint.push(g);
            }
            ("factor", true) => {
                let vs = vars
                    .as_ref()
                    .ok_or_else(|| err_at(l.line_no, "`vars` must be set before factor blocks"))?;
                let fields = block_fields(&l.value, l.line_no, &["radicand", "q", "c"])?;
                let idx = parse_u32(get_field(&fields, "radicand", l.line_no)?, l.line_no, "radicand index")?;
                let q_text = unquote(get_field(&fields, "q", l.line_no)?, l.line_no, "q")?;
                let q = ring::parse_poly(vs, &q_text)
                    .map_err(|e| e.offset(l.line_no, 1))?;
                let c = parse_u32(get_field(&fields, "c", l.line_no)?, l.line_no, "c")?;
                if c == 0 {
                    return Err(err_at(l.line_no, "factor exponent c must be positive"));
                }
                factors.push((l.line_no, idx as usize, q, c));
            }
            (other, _) => {
                return Err(err_at(l.line_no, format!("unknown key `{other}`")));
            }
        }
    }

    let (p, p_line) = p.ok_or_else(|| err_at(1, "missing key `p`"))?;
    if !is_prime_u32(p) {
        return Err(err_at(p_line, format!("p = {p} is not prime")));
    }
    let vars = vars.ok_or_else(|| err_at(1, "missing key `vars`"))?;
    for (line, idx, q, c) in factors {
        if idx == 0 || idx > radicands.len() {
            return Err(err_at(line, format!("factor references radicand {idx}, which does not exist")));
        }
        radicands[idx - 1].factors.push((q, c));
    }

    Ok(SpecFile {
        p,
        vars,
        radicands,
        disjoint,
        k_candidates,
        seed,
        samples,
    })
}

fn is_prime_u32(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

// ---------------------------------------------------------------------------
// element grammar

/// Parse `p^-<k> * <poly in vars and w1..wr, z1..zt>` (the prefix optional).
/// Generator exponents are unrestricted and normal-formed on parse.
pub fn parse_element(ctx: &TowerCtx, text: &str) -> Result<ClosureElement, ParseError> {
    // denominator prefix
    let trimmed = text.trim_start();
    let (k, poly_text) = match split_denominator_prefix(trimmed) {
        Some((base, k, rest)) => {
            if base != ctx.p() {
                return Err(err_at(1, format!("denominator base {base} is not p = {}", ctx.p())));
            }
            (k, rest)
        }
        None => (0, trimmed),
    };

    let base_names: Vec<String> = ctx.vars().names().to_vec();
    let mut all_names = base_names.clone();
    for i in 0..ctx.dims() {
        all_names.push(ctx.gen_name(i));
    }
    let ext_vars = VarSet::new(all_names);
    let poly = ring::parse_poly(&ext_vars, poly_text)?;

    // split each monomial into base part and generator exponents, reducing
    // generator powers through w^p = f
    let nbase = base_names.len();
    let p = ctx.p();
    let mut elem = TowerElement::zero(ctx);
    for (m, c) in poly.terms() {
        let base_mono = Monomial::from_exps(m.exps()[..nbase].to_vec());
        let mut coeff = BasePoly::from_terms(ctx.vars(), [(base_mono, c.clone())]);
        let mut exps = Vec::with_capacity(ctx.dims());
        for g in 0..ctx.dims() {
            let e = m.exps()[nbase + g];
            let q = e / p;
            exps.push((e % p) as u8);
            if q > 0 {
                coeff = coeff.mul(&ctx.reducer(g).pow(q));
            }
        }
        elem = elem.add(&TowerElement::monomial(ctx, ExpVec::new(exps), coeff));
    }
    Ok(ClosureElement::new(k, elem))
}

/// Match `<int>^-<int> *` at the start; returns (base, k, rest).
fn split_denominator_prefix(text: &str) -> Option<(u32, u32, &str)> {
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    if i == 0 {
        return None;
    }
    let base: u32 = text[..i].parse().ok()?;
    let mut rest = text[i..].trim_start();
    rest = rest.strip_prefix('^')?.trim_start();
    rest = rest.strip_prefix('-')?.trim_start();
    let rb = rest.as_bytes();
    let mut j = 0;
    while j < rb.len() && rb[j].is_ascii_digit() {
        j += 1;
    }
    if j == 0 {
        return None;
    }
    let k: u32 = rest[..j].parse().ok()?;
    let tail = rest[j..].trim_start();
    let tail = tail.strip_prefix('*')?;
    Some((base, k, tail.trim_start()))
}

// ---------------------------------------------------------------------------
// running

#[derive(Debug, Clone)]
pub enum Subcommand {
    Check,
    Basis,
    Verify,
    Reduce(String),
    Pipeline,
    Disjoint,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub samples: Option<u32>,
    pub k_candidates: Option<Vec<u32>>,
}

pub const EXIT_VERIFIED: i32 = 0;
pub const EXIT_HYPOTHESIS: i32 = 1;
pub const EXIT_CONTRADICTION: i32 = 2;

/// Run a subcommand against a parsed spec; returns the exit code and the
/// report text. Output is byte-identical across runs for a fixed spec, seed
/// and sample count.
pub fn run(cmd: &Subcommand, spec: &SpecFile, opts: &RunOptions) -> (i32, String) {
    let seed = opts.seed.or(spec.seed).unwrap_or(0);
    let samples = opts.samples.or(spec.samples).unwrap_or(100) as usize;
    let k_candidates = opts
        .k_candidates
        .clone()
        .or_else(|| spec.k_candidates.clone())
        .unwrap_or_else(|| transforms::default_k_candidates(spec.p));

    match cmd {
        Subcommand::Check => run_check(spec),
        Subcommand::Basis => run_basis(spec),
        Subcommand::Verify => run_verify(spec, seed, samples),
        Subcommand::Reduce(element) => run_reduce(spec, element),
        Subcommand::Pipeline => run_pipeline(spec, &k_candidates),
        Subcommand::Disjoint => run_disjoint(spec),
    }
}

fn hypotheses_section(spec: &SpecFile, outcome: &Result<TowerCtx, crate::tower::TowerError>) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "= hypotheses =");
    let _ = writeln!(s, "p = {}", spec.p);
    let _ = writeln!(s, "variables: {}", spec.vars.names().join(", "));
    for (i, r) in spec.radicands.iter().enumerate() {
        let _ = writeln!(
            s,
            "radicand {}: f = {} (n = {}, d = {})",
            i + 1,
            r.f,
            r.n,
            r.n / spec.p
        );
    }
    for (j, g) in spec.disjoint.iter().enumerate() {
        let _ = writeln!(s, "block generator {}: g = {}", j + 1, g);
    }
    match outcome {
        Ok(ctx) => {
            for (i, rad) in ctx.radicands().iter().enumerate() {
                let _ = writeln!(
                    s,
                    "certificate {}: h = {}, g = {}",
                    i + 1,
                    rad.h,
                    rad.g
                );
            }
            let _ = writeln!(s, "result: all hypotheses verified");
        }
        Err(e) => {
            let _ = writeln!(s, "result: hypothesis rejected: {e}");
        }
    }
    s
}

fn basis_section(ctx: &TowerCtx, basis: &VBasis) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "= basis =");
    let sizes = basis
        .layer_sizes()
        .iter()
        .map(|n| n.to_string())
        .collect::<Vec<_>>()
        .join(", ");
    let _ = writeln!(
        s,
        "rank {} = {}^{}; layer sizes: {}",
        basis.len(),
        ctx.p(),
        ctx.dims(),
        sizes
    );
    let _ = writeln!(s, "{}", basis.render(ctx));
    s
}

fn closure_section(report: &ClosureReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "= closure =");
    let _ = writeln!(
        s,
        "basis products checked: {}, failures: {}",
        report.products_checked,
        report.product_failures.len()
    );
    for (i, j, w) in &report.product_failures {
        let _ = writeln!(s, "  product of entries {i} and {j}: {w}");
    }
    let _ = writeln!(
        s,
        "module action checks: {}, failures: {}",
        report.module_checked,
        report.module_failures.len()
    );
    for (name, pos, w) in &report.module_failures {
        let _ = writeln!(s, "  ({name}) * entry {pos}: {w}");
    }
    let _ = writeln!(
        s,
        "containment checks: {}, failures: {}",
        report.containment_checked,
        report.containment_failures.len()
    );
    for (name, w) in &report.containment_failures {
        let _ = writeln!(s, "  {name}: {w}");
    }
    let _ = writeln!(
        s,
        "result: {}",
        if report.passed() {
            "ring closure verified"
        } else {
            "closure verification FAILED"
        }
    );
    s
}

fn witnesses_section(report: &WitnessReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "= witnesses =");
    for c in &report.checks {
        if c.ok {
            let _ = writeln!(s, "{}: ok", c.name);
        } else {
            let _ = writeln!(s, "{}: FAILED (residual: {})", c.name, c.residual);
        }
    }
    let _ = writeln!(
        s,
        "result: {}",
        if report.passed() {
            "all witness identities hold"
        } else {
            "witness identities FAILED"
        }
    );
    s
}

fn oracle_section(ctx: &TowerCtx, basis: &VBasis, seed: u64, samples: usize) -> (bool, String) {
    let mut designated = vec![ClosureElement::new(1, TowerElement::one(ctx))];
    for i in 0..basis.len() {
        let coords = closure::VCoords::unit(ctx, basis, i);
        designated.push(basis.to_closure_element(ctx, &coords));
    }
    let report = oracle::membership_crosscheck(ctx, basis, samples, seed, &designated);
    let mut s = String::new();
    let _ = writeln!(s, "= oracle =");
    let _ = writeln!(s, "seed: {seed}");
    let _ = writeln!(s, "{report}");
    let _ = writeln!(
        s,
        "\nresult: {}",
        if report.passed() {
            "oracle agrees with basis reduction"
        } else {
            "oracle DISAGREES with basis reduction"
        }
    );
    (report.passed(), s)
}

fn run_check(spec: &SpecFile) -> (i32, String) {
    let outcome = make_tower(&spec.to_tower_spec());
    let code = if outcome.is_ok() {
        EXIT_VERIFIED
    } else {
        EXIT_HYPOTHESIS
    };
    (code, hypotheses_section(spec, &outcome))
}

fn run_basis(spec: &SpecFile) -> (i32, String) {
    let ctx = match make_tower(&spec.to_tower_spec()) {
        Ok(ctx) => ctx,
        Err(e) => return (EXIT_HYPOTHESIS, format!("hypothesis rejected: {e}\n")),
    };
    let basis = build_v_basis(&ctx);
    let mut out = basis.render(&ctx);
    out.push('\n');
    let prod_d: u64 = ctx.radicands().iter().map(|r| r.d as u64).product();
    if prod_d > 1 {
        let ext = extend_by_unit_degrees(&ctx, &basis).expect("degrees validated");
        out.push('\n');
        for i in 0..ext.rank() {
            out.push_str(&render_extended_line(&ctx, &basis, &ext, i));
            out.push('\n');
        }
    }
    (EXIT_VERIFIED, out)
}

fn run_verify(spec: &SpecFile, seed: u64, samples: usize) -> (i32, String) {
    let outcome = make_tower(&spec.to_tower_spec());
    let mut out = hypotheses_section(spec, &outcome);
    let ctx = match outcome {
        Ok(ctx) => ctx,
        Err(_) => return (EXIT_HYPOTHESIS, out),
    };
    let basis = build_v_basis(&ctx);
    out.push('\n');
    out.push_str(&basis_section(&ctx, &basis));

    let closure_report = closure::verify_closure_with(&ctx, &basis);
    out.push('\n');
    out.push_str(&closure_section(&closure_report));

    let witness_report = closure::integrality_witnesses(&ctx);
    out.push('\n');
    out.push_str(&witnesses_section(&witness_report));

    let (oracle_ok, oracle_text) = oracle_section(&ctx, &basis, seed, samples);
    out.push('\n');
    out.push_str(&oracle_text);

    let ok = closure_report.passed() && witness_report.passed() && oracle_ok;
    (
        if ok { EXIT_VERIFIED } else { EXIT_CONTRADICTION },
        out,
    )
}

fn run_reduce(spec: &SpecFile, element_text: &str) -> (i32, String) {
    let ctx = match make_tower(&spec.to_tower_spec()) {
        Ok(ctx) => ctx,
        Err(e) => return (EXIT_HYPOTHESIS, format!("hypothesis rejected: {e}\n")),
    };
    let elem = match parse_element(&ctx, element_text) {
        Ok(e) => e,
        Err(e) => return (EXIT_HYPOTHESIS, format!("element parse error: {e}\n")),
    };
    let basis = build_v_basis(&ctx);
    let mut out = String::new();
    let _ = writeln!(out, "= reduce =");
    let _ = writeln!(out, "element: {elem}");
    match basis.reduce(&ctx, &elem) {
        Ok(coords) => {
            let _ = writeln!(out, "in module: yes");
            for (i, c) in coords.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    let _ = writeln!(out, "{}  :  {}", basis.render_line(&ctx, i), c);
                }
            }
        }
        Err(w) => {
            let _ = writeln!(out, "in module: no");
            let _ = writeln!(
                out,
                "witness monomial exponents: {:?} (shifted monomial family)",
                w.exps.exps()
            );
            let _ = writeln!(out, "residual coefficient: {}", w.residual);
        }
    }
    (EXIT_VERIFIED, out)
}

fn pipeline_section(report: &PipelineReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "= pipeline =");
    let _ = writeln!(
        s,
        "p = {}, common k = {} (after substitution each variable denotes its k-th root)",
        report.p, report.common_k
    );
    for (i, input) in report.inputs.iter().enumerate() {
        let _ = writeln!(s, "input {}: f = {} (n = {})", i + 1, input.original, input.n);
        if let Some(red) = &input.reduction {
            for (q, c, d, e) in &red.factors {
                let _ = writeln!(s, "  factor: q = {q}, c = {c} = {d}*n + {e}");
            }
            let kept = red
                .radicands
                .iter()
                .map(|q| q.to_string())
                .collect::<Vec<_>>()
                .join("; ");
            let dropped = if red.dropped.is_empty() {
                "none".to_string()
            } else {
                red.dropped
                    .iter()
                    .map(|q| q.to_string())
                    .collect::<Vec<_>>()
                    .join("; ")
            };
            let _ = writeln!(s, "  radicands kept: {kept}");
            let _ = writeln!(s, "  dropped (exponent multiple of n): {dropped}");
        }
    }
    for (i, core) in report.cores.iter().enumerate() {
        let mono = monomial_text(core.input.vars(), &core.stripped_monomial);
        let _ = writeln!(
            s,
            "core {}: input = {}, stripped monomial = {}, core = {}",
            i + 1,
            core.input,
            mono,
            core.core
        );
        let _ = writeln!(s, "  certified at k = {}", core.k);
        let _ = writeln!(
            s,
            "  over the common extension: radicand = {}, h = {}, g = {}",
            core.substituted, core.cert.h, core.cert.g
        );
    }
    s
}

fn monomial_text(vars: &Arc<VarSet>, m: &Monomial) -> String {
    BasePoly::from_terms(vars, [(m.clone(), BigInt::from(1))]).to_string()
}

fn run_pipeline(spec: &SpecFile, k_candidates: &[u32]) -> (i32, String) {
    let inputs: Vec<(BasePoly, u32, Option<Vec<(BasePoly, u32)>>)> = spec
        .radicands
        .iter()
        .map(|r| {
            (
                r.f.clone(),
                r.n,
                if r.factors.is_empty() {
                    None
                } else {
                    Some(r.factors.clone())
                },
            )
        })
        .collect();
    match small_cm_pipeline(&inputs, spec.p, k_candidates) {
        Ok(report) => {
            let mut out = pipeline_section(&report);
            out.push('\n');
            out.push_str(&basis_section(&report.ctx, &report.basis));
            out.push('\n');
            out.push_str(&closure_section(&report.closure));
            out.push('\n');
            out.push_str(&witnesses_section(&report.witnesses));
            out.push('\n');
            let degrees = report
                .extended
                .degrees
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(", ");
            let _ = writeln!(
                out,
                "extended rank: {} (unit degrees: {})",
                report.extended.rank(),
                degrees
            );
            let _ = writeln!(
                out,
                "result: {}",
                if report.verified() {
                    "pipeline verified"
                } else {
                    "pipeline verification FAILED"
                }
            );
            (
                if report.verified() {
                    EXIT_VERIFIED
                } else {
                    EXIT_CONTRADICTION
                },
                out,
            )
        }
        Err(e) => (EXIT_HYPOTHESIS, format!("pipeline stage failed: {e}\n")),
    }
}

fn run_disjoint(spec: &SpecFile) -> (i32, String) {
    let mut out = String::new();
    let _ = writeln!(out, "= disjointness =");
    if spec.disjoint.is_empty() {
        let _ = writeln!(out, "no disjoint block in the spec");
        return (EXIT_HYPOTHESIS, out);
    }
    for (j, g) in spec.disjoint.iter().enumerate() {
        let _ = writeln!(out, "block generator {}: g = {}", j + 1, g);
    }
    match check_linear_disjointness(&spec.disjoint, spec.p) {
        Ok(check) => match check.witness {
            None => {
                let _ = writeln!(out, "result: linearly disjoint modulo {}", spec.p);
            }
            Some(witness) => {
                let _ = writeln!(
                    out,
                    "result: NOT disjoint; witness exponents {witness:?} give a p-th power modulo {}",
                    spec.p
                );
                return (EXIT_HYPOTHESIS, out);
            }
        },
        Err(e) => {
            let _ = writeln!(out, "result: hypothesis rejected: {e}");
            return (EXIT_HYPOTHESIS, out);
        }
    }

    if spec.radicands.is_empty() {
        return (EXIT_VERIFIED, out);
    }
    // mixed tower: full build and closure verification over the joint list
    match transforms::mixed_tower(&spec.to_tower_spec()) {
        Ok((ctx, basis, report)) => {
            out.push('\n');
            out.push_str(&basis_section(&ctx, &basis));
            out.push('\n');
            out.push_str(&closure_section(&report));
            (
                if report.passed() {
                    EXIT_VERIFIED
                } else {
                    EXIT_CONTRADICTION
                },
                out,
            )
        }
        Err(e) => {
            out.push('\n');
            let _ = writeln!(out, "mixed tower hypothesis rejected: {e}");
            (EXIT_HYPOTHESIS, out)
        }
    }
}
