use std::io::Read;

use serde_json::{json, Value};

use crossing_core::holonomy::{conjugacy_residual, holonomy_jet, HolonomyJet};
use crossing_core::lie::{self, Automorphism};
use crossing_core::normalform::{self, centralizer_solve, check_theorem1, CentralizerMonomial};
use crossing_core::parse::{parse_automorphism, parse_field};
use crossing_core::resonance::{
    classify_dim2, classify_dim3, decide_ntnr, enumerate_resonances, Class2, EigenData, NegativeResonance, Witness3,
};
use crossing_core::{GaussianRational, Shape, VectorField};

use crate::document::{parse_mu_list, Body, FieldDocument};
use crate::report::float;
use crate::{CliError, Command, EigenOpts, FieldOpts, WindowOpts};

type G = GaussianRational;
type Res<T> = Result<T, CliError>;

const DEFAULT_DEGREE: u32 = 4;

fn load(path: &str) -> Res<FieldDocument> {
    let mut text = String::new();
    if path == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
        return FieldDocument::parse("<stdin>", &text);
    }
    text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {path}: {e}")))?;
    FieldDocument::parse(path, &text)
}

fn coefficient(flag: &str, text: &str) -> Res<G> {
    text.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("--{flag}: `{text}` is not a Gaussian rational")))
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

fn map_json(phi: &Automorphism<G>) -> Value {
    json!({"x": phi.img_x().to_string(), "z": strings(phi.img_z_all())})
}

struct Loaded {
    doc: FieldDocument,
    n: usize,
    degree: u32,
}

fn load_fields(input: &FieldOpts) -> Res<Loaded> {
    let doc = load(&input.field)?;
    let n = doc.arity()?;
    let degree = input.degree.or(doc.degree).unwrap_or(DEFAULT_DEGREE);
    if degree == 0 {
        return Err(CliError::Usage("--degree must be at least 1".into()));
    }
    Ok(Loaded { doc, n, degree })
}

impl Loaded {
    fn field(&self, body: &Body, require_x_normalized: bool) -> Res<VectorField<G>> {
        let x = parse_field(&body.text, self.n, self.degree).map_err(|e| self.doc.locate(body, e))?;
        if require_x_normalized && !x.is_x_normalized() {
            return Err(CliError::Usage(format!(
                "{}:{}: field is not x-normalized",
                self.doc.path, body.first_line
            )));
        }
        Ok(x)
    }

    fn map(&self, body: &Body) -> Res<Automorphism<G>> {
        parse_automorphism(&body.text, Shape::new(self.n, self.degree)).map_err(|e| self.doc.locate(body, e))
    }

    fn header(&self, command: &str) -> Value {
        json!({
            "schema": 1,
            "command": command,
            "name": self.doc.name,
            "n": self.n,
            "degree": self.degree,
        })
    }
}

fn extend(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn eigen_from(opts: &EigenOpts) -> Res<(EigenData, Option<FieldDocument>)> {
    let doc = opts.field.as_deref().map(load).transpose()?;
    let mu = match (&opts.mu, doc.as_ref().and_then(|d| d.mu.clone())) {
        (Some(list), _) => parse_mu_list(list).map_err(|m| CliError::Usage(format!("--mu: {m}")))?,
        (None, Some(mu)) => mu,
        (None, None) => {
            return Err(CliError::Usage(
                "eigenvalues required: pass --mu or a --field document with a `mu` header".into(),
            ))
        }
    };
    Ok((EigenData::new(mu)?, doc))
}

fn degree_of(opts: &EigenOpts, doc: Option<&FieldDocument>) -> Res<u32> {
    let d = opts.degree.or(doc.and_then(|d| d.degree)).unwrap_or(DEFAULT_DEGREE);
    if d == 0 {
        return Err(CliError::Usage("--degree must be at least 1".into()));
    }
    Ok(d)
}

fn window(text: &str) -> Res<(i32, i32)> {
    let bad = || CliError::Usage(format!("--x-window: expected `lo,hi`, got `{text}`"));
    let (lo, hi) = text.split_once(',').ok_or_else(bad)?;
    let lo: i32 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i32 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn negative_json(w: &NegativeResonance) -> Value {
    json!({"p": w.p, "j": w.j + 1, "q": w.q, "K": w.k()})
}

fn monomial_json(m: &CentralizerMonomial) -> Value {
    json!({
        "field": m.field.to_string(),
        "l": m.l,
        "K": m.index.as_ref().map(|i| i.k().to_vec()),
        "j": m.index.as_ref().map(|i| i.j() + 1),
    })
}

fn window_inputs(w: &WindowOpts) -> Res<(EigenData, (i32, i32), u32)> {
    let (eigen, doc) = eigen_from(&w.eigen)?;
    let d = degree_of(&w.eigen, doc.as_ref())?;
    Ok((eigen, window(&w.x_window)?, d))
}

fn jet_json(h: &HolonomyJet) -> Value {
    let space = h.jet.space();
    let mut coefficients = Vec::new();
    for j in 0..h.n() {
        for (m, c) in space.monomials().iter().zip(h.jet.component(j)) {
            coefficients.push(json!({"j": j + 1, "z": m.as_slice(), "re": float(c.re), "im": float(c.im)}));
        }
    }
    let linear: Vec<Vec<Value>> = h
        .linear_part()
        .iter()
        .map(|row| row.iter().map(|c| json!([float(c.re), float(c.im)])).collect())
        .collect();
    json!({
        "base_point": [float(h.base_point.re), float(h.base_point.im)],
        "linear_part": linear,
        "coefficients": coefficients,
        "steps": {"accepted": h.stats.accepted, "rejected": h.stats.rejected},
    })
}

/// Report, whether it is JSON, and the exit code.
pub(crate) fn dispatch(command: Command) -> Res<(Value, bool, i32)> {
    Ok(match command {
        Command::Normalize { input, x_cap, out } => {
            let l = load_fields(&input)?;
            let body = &l.doc.sections(1, "one field")?[0];
            let x = l.field(body, input.require_x_normalized)?;
            let x_cap = x_cap.or(l.doc.x_cap).unwrap_or(l.degree as i32);
            let mu = match &l.doc.mu {
                Some(mu) => mu.clone(),
                None => x
                    .linear_part()
                    .iter()
                    .enumerate()
                    .map(|(i, row)| {
                        row[i].is_constant().then(|| row[i].coeff(0)).ok_or_else(|| {
                            CliError::Usage("no `mu` header and the linear diagonal is not constant".into())
                        })
                    })
                    .collect::<Res<Vec<_>>>()?,
            };
            let eigen = EigenData::new(mu)?;
            let nf = normalform::normalize(&x, &eigen, x_cap)?;
            let verified = normalform::verify_conjugation(&nf.normalizer, &capped(&x, x_cap)?, &nf.normal_field)?
                .is_zero();
            let resonant: Vec<Value> = nf
                .resonant_coeffs
                .iter()
                .map(|r| json!({"K": r.k, "j": r.j + 1, "x_exp": r.x_exp, "coeff": r.coeff.to_string()}))
                .collect();
            let linear: Vec<Vec<String>> = nf.normal_field.linear_part().iter().map(|r| strings(r)).collect();
            let report = extend(
                l.header("normalize"),
                json!({
                    "x_cap": x_cap,
                    "mu": strings(eigen.mu()),
                    "normal_field": nf.normal_field.to_string(),
                    "linear_part": linear,
                    "jordan_eps": nf.jordan_eps,
                    "resonant": resonant,
                    "normalizer": map_json(&nf.normalizer),
                    "steps": nf.steps.len(),
                    "verified": verified,
                }),
            );
            (report, out.json, 0)
        }
        Command::Resonances { eigen: opts, out } => {
            let (eigen, doc) = eigen_from(&opts)?;
            let d = degree_of(&opts, doc.as_ref())?;
            let report = enumerate_resonances(&eigen, d)?;
            let decision = decide_ntnr(&eigen);
            let resonant: Vec<Value> = report
                .resonant
                .iter()
                .map(|r| json!({"K": r.k, "s": r.s, "x_exp": r.x_exp}))
                .collect();
            let value = json!({
                "schema": 1,
                "command": "resonances",
                "mu": strings(eigen.mu()),
                "bound": d,
                "resonant": resonant,
                "negative_at_bound": report.negative.as_ref().map(negative_json),
                "ntnr": decision.holds,
                "exact": decision.exact,
                "witness": decision.witness.as_ref().map(negative_json),
            });
            (value, out.json, 0)
        }
        Command::Classify2 { lambda, out } => {
            let lam = coefficient("lambda", &lambda)?;
            let class = match classify_dim2(&lam) {
                Class2::Linearizable => "Linearizable",
                Class2::ClassifiedByHolonomy => "ClassifiedByHolonomy",
            };
            (
                json!({"schema": 1, "command": "classify2", "lambda": lam.to_string(), "class": class}),
                out.json,
                0,
            )
        }
        Command::Classify3 { lambda, mu, out } => {
            let lam = coefficient("lambda", &lambda)?;
            let mu = coefficient("mu", &mu)?;
            let c = classify_dim3(&lam, &mu);
            let witness = c.witness.as_ref().map(|w| match w {
                Witness3::Resonance { p, q } => json!({"p": p, "q": q}),
                Witness3::Cone { p1, p2, q } => json!({"p1": p1, "p2": p2, "q": q}),
            });
            (
                json!({
                    "schema": 1,
                    "command": "classify3",
                    "lambda": lam.to_string(),
                    "mu": mu.to_string(),
                    "case": c.case.tag(),
                    "witness": witness,
                    "swapped": c.swapped,
                }),
                out.json,
                0,
            )
        }
        Command::Centralizer { window: w, out } => {
            let (eigen, win, d) = window_inputs(&w)?;
            let result = centralizer_solve(&eigen, win, d);
            let value = json!({
                "schema": 1,
                "command": "centralizer",
                "mu": strings(eigen.mu()),
                "x_window": [win.0, win.1],
                "degree": d,
                "basis": result.basis.iter().map(monomial_json).collect::<Vec<_>>(),
                "negative_l": result.negative().is_some(),
            });
            (value, out.json, 0)
        }
        Command::CheckTheorem1 { window: w, out } => {
            let (eigen, win, d) = window_inputs(&w)?;
            let check = check_theorem1(&eigen, win, d);
            let value = json!({
                "schema": 1,
                "command": "check-theorem1",
                "mu": strings(eigen.mu()),
                "x_window": [win.0, win.1],
                "degree": d,
                "ntnr": check.ntnr,
                "holds": check.holds,
                "offending": check.offending.as_ref().map(monomial_json),
            });
            (value, out.json, if check.holds { 0 } else { 1 })
        }
        Command::CheckCommute { input, out } => {
            let l = load_fields(&input)?;
            let bodies = l.doc.sections(2, "two fields separated by `---`")?;
            let x = l.field(&bodies[0], input.require_x_normalized)?;
            let y = l.field(&bodies[1], input.require_x_normalized)?;
            let bracket = x.bracket(&y)?;
            let value = extend(
                l.header("check-commute"),
                json!({"bracket": bracket.to_string(), "commute": bracket.is_zero()}),
            );
            (value, out.json, 0)
        }
        Command::Exp { input, out } => {
            let l = load_fields(&input)?;
            let x = l.field(&l.doc.sections(1, "one field")?[0], input.require_x_normalized)?;
            let phi = lie::exp(&x)?;
            (extend(l.header("exp"), json!({"map": map_json(&phi)})), out.json, 0)
        }
        Command::Log { input, out } => {
            let l = load_fields(&input)?;
            let phi = l.map(&l.doc.sections(1, "one map")?[0])?;
            let x = lie::log(&phi)?;
            (extend(l.header("log"), json!({"field": x.to_string()})), out.json, 0)
        }
        Command::Holonomy { input, numeric, out } => {
            let l = load_fields(&input)?;
            let x = l.field(&l.doc.sections(1, "one field")?[0], input.require_x_normalized)?;
            let h = holonomy_jet(&x, l.degree, numeric.tol)?;
            let value = extend(extend(l.header("holonomy"), json!({"tol": numeric.tol})), jet_json(&h));
            (value, out.json, 0)
        }
        Command::ConjugacyCheck {
            input,
            numeric,
            threshold,
            out,
        } => {
            let l = load_fields(&input)?;
            let bodies = l.doc.sections(2, "a field and a map separated by `---`")?;
            let x = l.field(&bodies[0], input.require_x_normalized)?;
            let psi = l.map(&bodies[1])?;
            let report = conjugacy_residual(&x, &psi, l.degree, numeric.tol)?;
            let pushed = lie::pushforward(&psi, &x)?;
            let ok = report.residual <= threshold;
            let value = extend(
                l.header("conjugacy-check"),
                json!({
                    "tol": numeric.tol,
                    "threshold": threshold,
                    "pushforward": pushed.to_string(),
                    "residual": float(report.residual),
                    "conjugate": ok,
                }),
            );
            (value, out.json, if ok { 0 } else { 1 })
        }
    })
}

/// `x` in the quotient used by `normalize`.
fn capped(x: &VectorField<G>, x_cap: i32) -> Res<VectorField<G>> {
    let shape = x.shape().with_x_cap(Some(x_cap));
    let a = x.a().reshape(shape)?;
    let b = x.b_all().iter().map(|s| s.reshape(shape)).collect::<Result<Vec<_>, _>>()?;
    Ok(VectorField::new(a, b)?)
}
