//! Compiles a parsed script against its declarations and executes the
//! assertions symbolically and, when enabled, numerically.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use kleinkit_core::algebra::{bracket_raw, normal_order, substitute_raw, ExchangeMatrix, Mode};
use kleinkit_core::fock::{check_zero, evaluate_guarded, FockSpace, COMPOSED_TOL, DEFAULT_CUTOFF};
use kleinkit_core::klein::{induced_exchange, relation_exprs, standard_map, verify_klein, DressingMap, ModeDressing, Relation};
use kleinkit_core::{AlgebraSpec, Gaussian, ModeId, OpExpr, PhaseVector, QMode, UnitScalar};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

use crate::dsl::{parse, Expect, Expr, MapDef, Numeric, Pos, Program, StmtKind};
use crate::report::{AssertionReport, ErrorInfo, NumericResult, RunReport};

/// Angles used for formal-q scripts when numeric checks are on but no list is given.
pub const PROBE_THETAS: [f64; 3] = [PI, PI / 3.0, 2.0 * PI / 7.0];

/// Command-line overrides; each takes precedence over the script's directive.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Options {
    pub numeric_dim: Option<usize>,
    pub theta: Option<Vec<f64>>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{}:{}: {message}", pos.line, pos.col)]
pub struct SemanticError {
    pub pos: Pos,
    pub message: String,
}

pub fn check_source(script: &str, src: &str, opts: &Options) -> RunReport {
    match parse(src) {
        Ok(program) => run(&program, script, opts),
        Err(e) => RunReport::from_error(
            script,
            ErrorInfo { line: e.pos.line, column: e.pos.col, message: e.message.clone(), expected: e.expected.clone() },
        ),
    }
}

pub fn run(program: &Program, script: &str, opts: &Options) -> RunReport {
    match compile(program, opts) {
        Ok(plan) => RunReport::from_assertions(script, plan.execute()),
        Err(e) => RunReport::from_error(
            script,
            ErrorInfo { line: e.pos.line, column: e.pos.col, message: e.message, expected: Vec::new() },
        ),
    }
}

#[derive(Clone, Debug)]
enum Value {
    Expr(OpExpr),
    Map(DressingMap),
}

#[derive(Clone, Debug)]
enum Check {
    Zero(OpExpr),
    Equal(OpExpr, OpExpr),
    Bracket { x: OpExpr, y: OpExpr, s: UnitScalar, rhs: OpExpr },
    Verify { map: DressingMap, expected: ExchangeMatrix },
}

#[derive(Clone, Debug)]
struct Planned {
    line: usize,
    kind: &'static str,
    check: Check,
}

#[derive(Clone, Debug)]
struct NumericPlan {
    space: FockSpace,
    thetas: Vec<f64>,
    tol: f64,
}

/// A compiled script: frozen algebra plus assertions in source order.
pub struct Plan {
    spec: AlgebraSpec,
    checks: Vec<Planned>,
    numeric: Option<NumericPlan>,
}

struct Compiler {
    modes: Vec<Mode>,
    exchanges: Vec<(usize, usize, UnitScalar)>,
    q: QMode,
    spec: Option<AlgebraSpec>,
    values: HashMap<String, Value>,
    dim: Option<usize>,
    theta: Option<Vec<f64>>,
    tol: Option<f64>,
    numeric_directive: bool,
    checks: Vec<Planned>,
    pos: Pos,
}

pub fn compile(program: &Program, opts: &Options) -> Result<Plan, SemanticError> {
    let mut c = Compiler {
        modes: Vec::new(),
        exchanges: Vec::new(),
        q: QMode::Formal,
        spec: None,
        values: HashMap::new(),
        dim: None,
        theta: None,
        tol: None,
        numeric_directive: false,
        checks: Vec::new(),
        pos: Pos::default(),
    };
    for stmt in &program.statements {
        c.pos = stmt.pos;
        c.statement(&stmt.kind)?;
    }
    c.freeze()?;
    c.finish(opts)
}

impl Compiler {
    fn err<T>(&self, message: impl Into<String>) -> Result<T, SemanticError> {
        Err(SemanticError { pos: self.pos, message: message.into() })
    }

    fn declaring(&self, what: &str) -> Result<(), SemanticError> {
        if self.spec.is_some() {
            return self.err(format!("{what} must precede the first let or assertion"));
        }
        Ok(())
    }

    fn mode(&self, name: &str) -> Result<ModeId, SemanticError> {
        match self.modes.iter().position(|m| m.name == name) {
            Some(i) => Ok(ModeId(i)),
            None => self.err(format!("undefined mode '{name}'")),
        }
    }

    fn freeze(&mut self) -> Result<&AlgebraSpec, SemanticError> {
        if self.spec.is_none() {
            let built = AlgebraSpec::new(self.modes.clone())
                .and_then(|s| {
                    self.exchanges.iter().try_fold(s, |s, (i, j, v)| s.with_exchange(ModeId(*i), ModeId(*j), v.clone()))
                })
                .and_then(|s| s.with_q_mode(self.q));
            match built {
                Ok(s) => self.spec = Some(s),
                Err(e) => return self.err(e.to_string()),
            }
        }
        Ok(self.spec.as_ref().unwrap())
    }

    fn statement(&mut self, kind: &StmtKind) -> Result<(), SemanticError> {
        match kind {
            StmtKind::Mode(name, statistics) => {
                self.declaring("mode declarations")?;
                self.modes.push(Mode { name: name.clone(), statistics: *statistics });
            }
            StmtKind::Exchange(a, b, v) => {
                self.declaring("exchange settings")?;
                let (i, j) = (self.mode(a)?, self.mode(b)?);
                if i == j {
                    return self.err("exchange needs two distinct modes");
                }
                let v = self.scalar(v)?;
                if !v.is_unit_monomial() {
                    return self.err(format!("exchange value {v} is not a unit monomial c*q^k with |c| = 1"));
                }
                self.exchanges.push((i.0, j.0, v));
            }
            StmtKind::Q(q) => {
                self.declaring("the q setting")?;
                self.q = *q;
            }
            StmtKind::Let(name, e) => {
                self.freeze()?;
                let v = self.expr(e)?;
                self.values.insert(name.clone(), Value::Expr(v));
            }
            StmtKind::LetMap(name, def) => {
                let spec = self.freeze()?.clone();
                let map = match def {
                    MapDef::Catalog(c) => match standard_map(c, &spec) {
                        Ok(m) => m,
                        Err(e) => return self.err(e.to_string()),
                    },
                    MapDef::Explicit(entries) => {
                        let mut modes = vec![ModeDressing::bare(); spec.len()];
                        let mut seen = vec![false; spec.len()];
                        for entry in entries {
                            let i = self.mode(&entry.mode)?.0;
                            if std::mem::replace(&mut seen[i], true) {
                                return self.err(format!("mode '{}' dressed twice", entry.mode));
                            }
                            let scale = match &entry.scale {
                                Some(s) => self.scalar(s)?,
                                None => UnitScalar::one(),
                            };
                            modes[i] = ModeDressing { scale, phase: self.phase(&entry.phase)? };
                        }
                        match DressingMap::from_modes(modes) {
                            Ok(m) => m,
                            Err(e) => return self.err(e.to_string()),
                        }
                    }
                };
                self.values.insert(name.clone(), Value::Map(map));
            }
            StmtKind::AssertZero(e) => {
                self.freeze()?;
                let check = Check::Zero(self.expr(e)?);
                self.push(kind, check);
            }
            StmtKind::AssertEqual(x, y) => {
                self.freeze()?;
                let check = Check::Equal(self.expr(x)?, self.expr(y)?);
                self.push(kind, check);
            }
            StmtKind::AssertBracket { x, y, s, rhs } => {
                self.freeze()?;
                let check = Check::Bracket { x: self.expr(x)?, y: self.expr(y)?, s: self.scalar(s)?, rhs: self.expr(rhs)? };
                self.push(kind, check);
            }
            StmtKind::VerifyMap(name, expect) => {
                let spec = self.freeze()?.clone();
                let map = match self.values.get(name) {
                    Some(Value::Map(m)) => m.clone(),
                    Some(Value::Expr(_)) => return self.err(format!("'{name}' is an expression, not a map")),
                    None => return self.err(format!("undefined map '{name}'")),
                };
                let mut expected = match induced_exchange(&map, spec.exchange()) {
                    Ok(q) => q,
                    Err(e) => return self.err(e.to_string()),
                };
                for e in expect {
                    let result = match e {
                        Expect::All(v) => {
                            let v = self.scalar(v)?;
                            (0..spec.len())
                                .flat_map(|i| (i + 1..spec.len()).map(move |j| (i, j)))
                                .try_for_each(|(i, j)| expected.set(i, j, v.clone()))
                        }
                        Expect::Pair(a, b, v) => {
                            let (i, j) = (self.mode(a)?, self.mode(b)?);
                            let v = self.scalar(v)?;
                            expected.set(i.0, j.0, v)
                        }
                    };
                    if let Err(e) = result {
                        return self.err(e.to_string());
                    }
                }
                self.push(kind, Check::Verify { map, expected });
            }
            StmtKind::Numeric(n) => {
                self.numeric_directive = true;
                match n {
                    Numeric::Dim(d) => self.dim = Some(*d),
                    Numeric::Theta(t) => self.theta = Some(t.clone()),
                    Numeric::Tol(t) => self.tol = Some(*t),
                }
            }
        }
        Ok(())
    }

    fn push(&mut self, kind: &StmtKind, check: Check) {
        self.checks.push(Planned { line: self.pos.line, kind: kind.keyword(), check });
    }

    fn phase(&self, list: &[(String, i64)]) -> Result<PhaseVector, SemanticError> {
        let mut v = vec![0i64; self.modes.len()];
        let mut seen = vec![false; self.modes.len()];
        for (name, e) in list {
            let i = self.mode(name)?.0;
            if std::mem::replace(&mut seen[i], true) {
                return self.err(format!("phase lists mode '{name}' twice"));
            }
            v[i] = *e;
        }
        Ok(PhaseVector::new(v))
    }

    fn scalar(&self, e: &Expr) -> Result<UnitScalar, SemanticError> {
        let v = self.expr(e)?;
        match as_scalar(&v) {
            Some(s) => Ok(s),
            None => self.err(format!("'{e}' is not a scalar")),
        }
    }

    fn expr(&self, e: &Expr) -> Result<OpExpr, SemanticError> {
        let bin = |x: &Expr, y: &Expr| -> Result<(OpExpr, OpExpr), SemanticError> { Ok((self.expr(x)?, self.expr(y)?)) };
        Ok(match e {
            Expr::Num(r) => OpExpr::scalar(Gaussian::new(r.clone(), BigRational::from_integer(0.into())).into()),
            Expr::Complex(re, im) => OpExpr::scalar(Gaussian::new(re.clone(), im.clone()).into()),
            Expr::Q => OpExpr::scalar(UnitScalar::q_pow(1)),
            Expr::Ann(m) => OpExpr::ann(self.mode(m)?),
            Expr::Cre(m) => OpExpr::cre(self.mode(m)?),
            Expr::Adj(x) => self.expr(x)?.adjoint_raw(),
            Expr::Phase(list) => OpExpr::phase(self.phase(list)?),
            Expr::Comm(x, y) => {
                let (x, y) = bin(x, y)?;
                bracket_raw(&x, &y, &UnitScalar::one())
            }
            Expr::AComm(x, y) => {
                let (x, y) = bin(x, y)?;
                bracket_raw(&x, &y, &-UnitScalar::one())
            }
            Expr::QComm(x, y, s) => {
                let (x, y) = bin(x, y)?;
                bracket_raw(&x, &y, &self.scalar(s)?)
            }
            Expr::Map(d, x) => match self.values.get(d) {
                Some(Value::Map(m)) => match substitute_raw(&self.expr(x)?, &m.assignment()) {
                    Ok(v) => v,
                    Err(e) => return self.err(e.to_string()),
                },
                Some(Value::Expr(_)) => return self.err(format!("'{d}' is an expression, not a map")),
                None => return self.err(format!("undefined map '{d}'")),
            },
            Expr::Var(v) => match self.values.get(v) {
                Some(Value::Expr(x)) => x.clone(),
                Some(Value::Map(_)) => return self.err(format!("'{v}' is a map, not an expression")),
                None => return self.err(format!("undefined name '{v}'")),
            },
            Expr::Neg(x) => -&self.expr(x)?,
            Expr::Add(x, y) => {
                let (x, y) = bin(x, y)?;
                &x + &y
            }
            Expr::Sub(x, y) => {
                let (x, y) = bin(x, y)?;
                &x - &y
            }
            Expr::Mul(x, y) => {
                let (x, y) = bin(x, y)?;
                &x * &y
            }
            Expr::Pow(x, k) => {
                let base = self.expr(x)?;
                if let Some(s) = as_scalar(&base).filter(|s| s.is_unit_monomial()) {
                    match s.monomial_pow(*k) {
                        Ok(p) => OpExpr::scalar(p),
                        Err(e) => return self.err(e.to_string()),
                    }
                } else if (0..=32).contains(k) {
                    (0..*k).fold(OpExpr::one(), |acc, _| &acc * &base)
                } else {
                    return self.err(format!("exponent {k} needs a unit-monomial scalar base (operators allow 0..=32)"));
                }
            }
        })
    }

    fn finish(self, opts: &Options) -> Result<Plan, SemanticError> {
        let spec = self.spec.clone().expect("frozen");
        let enabled = self.numeric_directive || opts.numeric_dim.is_some() || opts.theta.is_some();
        let numeric = if enabled {
            let dim = opts.numeric_dim.or(self.dim).unwrap_or(DEFAULT_CUTOFF);
            let tol = opts.tol.or(self.tol).unwrap_or(COMPOSED_TOL);
            if tol.is_nan() || tol <= 0.0 {
                return self.err("tolerance must be positive");
            }
            let requested = opts.theta.clone().or(self.theta.clone());
            let thetas = match spec.q_mode().theta() {
                Some(t0) => {
                    if let Some(bad) = requested.iter().flatten().find(|t| {
                        let d = (*t - t0).rem_euclid(TAU);
                        d.min(TAU - d) > 1e-12
                    }) {
                        return self.err(format!("theta {bad} conflicts with the specialized q (theta = {t0})"));
                    }
                    vec![t0]
                }
                None => {
                    let mut t = requested.unwrap_or_else(|| PROBE_THETAS.to_vec());
                    if let Some(seed) = opts.seed {
                        t.push(rand_chacha::ChaCha8Rng::seed_from_u64(seed).gen_range(0.0..TAU));
                    }
                    t
                }
            };
            let space = match FockSpace::for_spec(&spec, dim) {
                Ok(s) => s,
                Err(e) => return self.err(format!("numeric space: {e}")),
            };
            Some(NumericPlan { space, thetas, tol })
        } else {
            None
        };
        Ok(Plan { spec, checks: self.checks, numeric })
    }
}

fn as_scalar(e: &OpExpr) -> Option<UnitScalar> {
    e.terms().iter().try_fold(UnitScalar::zero(), |acc, t| t.word.is_empty().then(|| &acc + &t.coeff))
}

fn relation_name(r: Relation) -> &'static str {
    match r {
        Relation::Ladder => "ladder",
        Relation::Pauli => "pauli",
        Relation::Exchange => "exchange",
        Relation::MixedExchange => "mixed-exchange",
        Relation::NumberCommute => "number-commute",
    }
}

impl Plan {
    pub fn spec(&self) -> &AlgebraSpec {
        &self.spec
    }

    pub fn num_assertions(&self) -> usize {
        self.checks.len()
    }

    /// Assertions run in parallel; the result follows source order.
    pub fn execute(&self) -> Vec<AssertionReport> {
        self.checks.par_iter().map(|c| self.execute_one(c)).collect()
    }

    fn raw_residuals(&self, check: &Check) -> Result<Vec<OpExpr>, String> {
        Ok(match check {
            Check::Zero(x) => vec![x.clone()],
            Check::Equal(x, y) => vec![x - y],
            Check::Bracket { x, y, s, rhs } => vec![&bracket_raw(x, y, s) - rhs],
            Check::Verify { map, expected } => relation_exprs(map, &self.spec, expected)
                .map_err(|e| e.to_string())?
                .into_iter()
                .map(|r| r.expr)
                .collect(),
        })
    }

    fn symbolic(&self, check: &Check) -> Result<(bool, Option<String>), String> {
        if let Check::Verify { map, expected } = check {
            let report = verify_klein(map, &self.spec, expected).map_err(|e| e.to_string())?;
            if report.pass() {
                return Ok((true, None));
            }
            let w: Vec<String> = report
                .failures()
                .map(|c| {
                    let (i, j) = c.modes;
                    format!(
                        "{} ({},{}): {}",
                        relation_name(c.relation),
                        self.spec.name(ModeId(i)),
                        self.spec.name(ModeId(j)),
                        c.residual.display(&self.spec)
                    )
                })
                .collect();
            return Ok((false, Some(w.join("; "))));
        }
        let raw = self.raw_residuals(check)?.pop().expect("one residual");
        let nf = normal_order(&raw, &self.spec).map_err(|e| e.to_string())?;
        Ok(if nf.is_empty() { (true, None) } else { (false, Some(nf.display(&self.spec).to_string())) })
    }

    fn numeric(&self, plan: &NumericPlan, check: &Check) -> Result<(bool, Vec<NumericResult>), String> {
        let raws = self.raw_residuals(check)?;
        let mut pass = true;
        let mut out = Vec::new();
        for &theta in &plan.thetas {
            let (mut interior, mut full) = (0.0f64, 0.0f64);
            for raw in &raws {
                let m = evaluate_guarded(raw, &self.spec, &plan.space, theta).map_err(|e| e.to_string())?;
                let r = check_zero(&m, &plan.space, plan.tol).map_err(|e| e.to_string())?;
                pass &= r.pass;
                interior = interior.max(r.interior_residual);
                full = full.max(r.full_residual);
            }
            out.push(NumericResult { theta, interior_residual: interior, full_residual: full });
        }
        Ok((pass, out))
    }

    fn execute_one(&self, planned: &Planned) -> AssertionReport {
        let mut report = AssertionReport {
            line: planned.line,
            kind: planned.kind.to_string(),
            symbolic_pass: false,
            numeric: Vec::new(),
            pass: false,
            witness: None,
        };
        match self.symbolic(&planned.check) {
            Ok((pass, witness)) => {
                report.symbolic_pass = pass;
                report.witness = witness;
            }
            Err(e) => {
                report.witness = Some(format!("error: {e}"));
                return report;
            }
        }
        let mut numeric_pass = true;
        if let Some(plan) = &self.numeric {
            match self.numeric(plan, &planned.check) {
                Ok((pass, results)) => {
                    numeric_pass = pass;
                    report.numeric = results;
                    if !pass && report.witness.is_none() {
                        report.witness = Some("numeric residual above tolerance".into());
                    }
                }
                Err(e) => {
                    numeric_pass = false;
                    report.witness.get_or_insert(format!("numeric error: {e}"));
                }
            }
        }
        report.pass = report.symbolic_pass && numeric_pass;
        report
    }
}
