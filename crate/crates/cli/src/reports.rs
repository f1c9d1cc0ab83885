//! Report types printed by the subcommands and their tabular views.

use itergcd::dynamics::{CycleStatus, Independence, OrbitRecord};
use itergcd::heights::{CanonicalHeight, ProbeRow};
use itergcd::lab::{CellOutcome, GcdGridReport, LinearNormalForm, SuiteReport};
use itergcd::multiplicity::{CaseTag, Congruence, DivisorReport, MultiplicityCertificate};
use itergcd::poly::serde_rational;
use itergcd::{Poly, Rational};
use serde::Serialize;

use crate::emit::{plain, real, EmitError, Report, Table};

fn tag<T: Serialize>(t: &T) -> String {
    serde_json::to_value(t).map(|v| plain(&v)).unwrap_or_default()
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(|v| v.to_string()).unwrap_or_default()
}

fn factor_list(fs: &[(Poly, usize)]) -> String {
    fs.iter()
        .map(|(p, e)| format!("({p})^{e}"))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn case_name(c: &CaseTag) -> String {
    match c {
        CaseTag::NotPeriodic => "not-periodic".into(),
        CaseTag::ConstantC => "constant-c".into(),
        CaseTag::U1Nontorsion => "u1-nontorsion".into(),
        CaseTag::U1Torsion { s, d } => format!("u1-torsion(s={s},d={d})"),
        CaseTag::Superattracting { u } => format!("superattracting(u={u})"),
    }
}

pub fn congruence_name(c: &Congruence) -> String {
    match c {
        Congruence::Class { ell, r } => format!("n = {ell} + {r}k"),
        Congruence::Single { n } => format!("n = {n}"),
        Congruence::None => "none".into(),
    }
}

#[derive(Serialize)]
#[serde(transparent)]
pub struct GridReport(pub GcdGridReport);

impl Report for GridReport {
    fn table(&self) -> Option<Table> {
        let mut t = Table::new(&["m", "n", "status", "gcd_degree", "factors", "millis"]);
        for cell in &self.0.cells {
            let (status, deg) = match &cell.outcome {
                CellOutcome::Ok { gcd, .. } => ("ok", gcd.deg().to_string()),
                CellOutcome::Degenerate { .. } => ("degenerate", String::new()),
                CellOutcome::Error { .. } => ("error", String::new()),
            };
            t.push(vec![
                cell.m.to_string(),
                cell.n.to_string(),
                status.into(),
                deg,
                factor_list(cell.factors()),
                real(cell.millis),
            ]);
        }
        Some(t)
    }

    fn markdown(&self) -> Result<String, EmitError> {
        let r = &self.0;
        let mut out = format!(
            "f = {}, g = {}, c = {}, N = {}{}\n\nstabilized: {}\n\n",
            r.f,
            r.g,
            r.c,
            r.grid_n,
            if r.diagonal_only { " (diagonal)" } else { "" },
            if r.stabilized { "yes" } else { "no" }
        );
        let mut u = Table::new(&["factor", "max multiplicity"]);
        for (p, e) in &r.factor_universe {
            u.push(vec![p.to_string(), e.to_string()]);
        }
        out.push_str(&u.to_markdown());
        out.push('\n');
        out.push_str(&self.table().expect("tabular").to_markdown());
        Ok(out)
    }
}

#[derive(Serialize)]
#[serde(transparent)]
pub struct DivisorOut(pub DivisorReport);

impl Report for DivisorOut {
    fn table(&self) -> Option<Table> {
        let mut t = Table::new(&["factor", "against", "case", "ell", "r", "e", "u", "bound_m", "congruence"]);
        for fc in &self.0.factors {
            let c = &fc.certificate;
            t.push(vec![
                fc.factor.to_string(),
                tag(&fc.against),
                case_name(&c.case),
                opt(&c.ell),
                opt(&c.r),
                opt(&c.e),
                opt(&c.u),
                c.bound_m.to_string(),
                congruence_name(&c.congruence),
            ]);
        }
        Some(t)
    }

    fn markdown(&self) -> Result<String, EmitError> {
        Ok(format!("h = {}\n\n{}", self.0.h, self.table().expect("tabular").to_markdown()))
    }
}

#[derive(Serialize)]
pub struct DirectCheck {
    pub n: u64,
    pub v: usize,
    pub within_bound: bool,
    pub in_class: bool,
}

#[derive(Serialize)]
pub struct CertReport {
    pub certificate: MultiplicityCertificate,
    pub checks: Vec<DirectCheck>,
}

impl Report for CertReport {
    fn markdown(&self) -> Result<String, EmitError> {
        let c = &self.certificate;
        let mut t = Table::new(&["field", "value"]);
        let rows = [
            ("lambda_field", c.lambda_field.modulus().render("t")),
            ("c0", c.c0.render()),
            ("case", case_name(&c.case)),
            ("ell", opt(&c.ell)),
            ("r", opt(&c.r)),
            ("e", opt(&c.e)),
            ("u", opt(&c.u)),
            ("bound_m", c.bound_m.to_string()),
            ("congruence", congruence_name(&c.congruence)),
            (
                "exceptional_ns",
                c.exceptional_ns
                    .iter()
                    .map(|(n, v)| format!("n={n}: v={v}"))
                    .collect::<Vec<_>>()
                    .join("; "),
            ),
            ("notes", c.notes.join("; ")),
        ];
        for (k, v) in rows {
            t.push(vec![k.into(), v]);
        }
        let mut checks = Table::new(&["n", "v", "within_bound", "in_class"]);
        for ch in &self.checks {
            checks.push(vec![
                ch.n.to_string(),
                ch.v.to_string(),
                ch.within_bound.to_string(),
                ch.in_class.to_string(),
            ]);
        }
        Ok(format!("{}\n{}", t.to_markdown(), checks.to_markdown()))
    }
}

#[derive(Serialize)]
pub struct HeightReport {
    pub f: Poly,
    pub x: String,
    pub field: String,
    pub height: CanonicalHeight,
}

impl Report for HeightReport {
    fn table(&self) -> Option<Table> {
        let h = &self.height;
        let mut t = Table::new(&["f", "x", "field", "value", "error_bound", "method", "steps_used"]);
        t.push(vec![
            self.f.to_string(),
            self.x.clone(),
            self.field.clone(),
            real(h.value),
            real(h.error_bound),
            tag(&h.method),
            h.steps_used.to_string(),
        ]);
        Some(t)
    }
}

#[derive(Serialize)]
#[serde(transparent)]
pub struct ProbeReport(pub Vec<ProbeRow>);

impl Report for ProbeReport {
    fn table(&self) -> Option<Table> {
        let mut t = Table::new(&["n", "factor", "factor_degree", "height", "error", "method", "predicted_bound"]);
        for r in &self.0 {
            t.push(vec![
                r.n.to_string(),
                r.factor.to_string(),
                r.factor_degree.to_string(),
                real(r.height),
                real(r.error),
                tag(&r.method),
                r.predicted_bound.map(real).unwrap_or_default(),
            ]);
        }
        Some(t)
    }
}

#[derive(Serialize)]
pub struct OrbitReport {
    pub start: String,
    pub field: String,
    pub points: Vec<String>,
    pub preperiod: Option<usize>,
    pub period: Option<usize>,
    pub escape: Option<itergcd::dynamics::EscapeReason>,
}

impl From<&OrbitRecord> for OrbitReport {
    fn from(o: &OrbitRecord) -> Self {
        OrbitReport {
            start: o.start.render(),
            field: o.start.field().modulus().render("t"),
            points: o.points.iter().map(|p| p.render()).collect(),
            preperiod: o.preperiod,
            period: o.period,
            escape: o.escape,
        }
    }
}

impl Report for OrbitReport {
    fn table(&self) -> Option<Table> {
        let mut t = Table::new(&["index", "point"]);
        for (i, p) in self.points.iter().enumerate() {
            t.push(vec![i.to_string(), p.clone()]);
        }
        Some(t)
    }

    fn markdown(&self) -> Result<String, EmitError> {
        let summary = match (self.preperiod, self.period, &self.escape) {
            (Some(pre), Some(per), _) => format!("preperiod {pre}, period {per}"),
            (_, _, Some(e)) => format!("escaped ({})", tag(e)),
            _ => "undetermined".into(),
        };
        Ok(format!("{summary}\n\n{}", self.table().expect("tabular").to_markdown()))
    }
}

#[derive(Serialize)]
pub struct RamifiedReport {
    pub q: Poly,
    pub point: String,
    pub status: CycleStatus,
}

impl Report for RamifiedReport {
    fn table(&self) -> Option<Table> {
        let mut t = Table::new(&["q", "point", "status"]);
        t.push(vec![self.q.to_string(), self.point.clone(), tag(&self.status)]);
        Some(t)
    }
}

#[derive(Serialize)]
pub struct LinearReport {
    pub f: Poly,
    pub g: Poly,
    pub c: Option<Poly>,
    pub n: usize,
    pub normal_form: LinearNormalForm,
    #[serde(serialize_with = "serde_rational::option")]
    pub lambda: Option<Rational>,
}

impl Report for LinearReport {
    fn table(&self) -> Option<Table> {
        let nf = &self.normal_form;
        let mut t = Table::new(&["f", "g", "c", "n", "alpha", "beta", "gamma", "shift", "lambda"]);
        t.push(vec![
            self.f.to_string(),
            self.g.to_string(),
            opt(&self.c),
            self.n.to_string(),
            nf.alpha.to_string(),
            nf.beta.to_string(),
            nf.gamma.to_string(),
            nf.shift.to_string(),
            self.lambda.as_ref().map(|l| l.to_string()).unwrap_or_else(|| "none".into()),
        ]);
        Some(t)
    }
}

#[derive(Serialize)]
pub struct IndepReport {
    pub f: Poly,
    pub g: Poly,
    pub result: Independence,
}

impl Report for IndepReport {
    fn table(&self) -> Option<Table> {
        let mut t = Table::new(&["f", "g", "result", "first", "second", "max_len"]);
        let row = match &self.result {
            Independence::Dependent { first, second } => {
                vec!["dependent".into(), first.to_string(), second.to_string(), String::new()]
            }
            Independence::NoCollisionUpTo { max_len } => {
                vec!["no-collision".into(), String::new(), String::new(), max_len.to_string()]
            }
        };
        let mut full = vec![self.f.to_string(), self.g.to_string()];
        full.extend(row);
        t.push(full);
        Some(t)
    }
}

#[derive(Serialize)]
#[serde(transparent)]
pub struct SuiteOut(pub SuiteReport);

impl Report for SuiteOut {
    fn table(&self) -> Option<Table> {
        let mut t = Table::new(&["family", "n", "claim", "result", "detail"]);
        for c in &self.0.claims {
            t.push(vec![
                c.family.to_string(),
                c.n.to_string(),
                c.statement.clone(),
                if c.passed { "pass" } else { "FAIL" }.into(),
                c.detail.clone(),
            ]);
        }
        Some(t)
    }

    fn markdown(&self) -> Result<String, EmitError> {
        Ok(self.0.to_markdown())
    }
}
