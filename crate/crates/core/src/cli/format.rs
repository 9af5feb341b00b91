//! Line-oriented text formats for operators, pairings, automorphism
//! presentations, vector lists and scenario files.
//!
//! Every format has a single canonical emission; parsers accept a little
//! more (blank lines, `#` comments, unsorted or redundant entries) and
//! report a [`Warning::NonCanonical`] when the input differs from it.

use std::collections::BTreeMap;
use std::fmt;

use crate::aut::{AutPresentation, InvertiblePair};
use crate::base::{fmt_rational, parse_rational, tokens, FinVec, Rational};
use crate::error::{Error, Result};
use crate::finitary::FinitaryOp;
use crate::mackey::{DiagonalSeq, MackeyOp};
use crate::pairing::PairingSpec;

#[derive(Clone, Debug, PartialEq)]
pub enum Operator {
    Finitary(FinitaryOp),
    Mackey(MackeyOp),
}

impl Operator {
    pub fn to_mackey(&self) -> MackeyOp {
        match self {
            Operator::Finitary(a) => MackeyOp::from_finitary(a),
            Operator::Mackey(a) => a.clone(),
        }
    }

    /// Applies `f` to both operands, staying finitary when both are.
    pub fn combine(
        &self,
        other: &Operator,
        fin: impl Fn(&FinitaryOp, &FinitaryOp) -> FinitaryOp,
        mk: impl Fn(&MackeyOp, &MackeyOp) -> MackeyOp,
    ) -> Operator {
        match (self, other) {
            (Operator::Finitary(a), Operator::Finitary(b)) => Operator::Finitary(fin(a, b)),
            _ => Operator::Mackey(mk(&self.to_mackey(), &other.to_mackey())),
        }
    }

    pub fn trace(&self) -> Result<Rational> {
        match self {
            Operator::Finitary(a) => Ok(a.trace()),
            Operator::Mackey(a) => a.trace(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Warning {
    /// The input was accepted but its canonical form is different.
    NonCanonical { canonical: String },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NonCanonical { .. } => f.write_str("input is not in canonical form"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<Warning>,
}

impl<T> Parsed<T> {
    fn checked(value: T, text: &str, canonical: String) -> Self {
        let warnings = if canonical == text {
            Vec::new()
        } else {
            vec![Warning::NonCanonical { canonical }]
        };
        Parsed { value, warnings }
    }
}

/// A source line together with its 1-based line number.
type Line<'a> = (usize, &'a str);

fn content_lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .map(|(n, l)| (n + 1, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
        .collect()
}

fn rational_at(line: usize, column: usize, s: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| Error::parse(line, column, format!("bad rational `{s}`")))
}

fn index_at(line: usize, column: usize, s: &str) -> Result<usize> {
    let i: usize = s
        .parse()
        .map_err(|_| Error::parse(line, column, format!("bad index `{s}`")))?;
    if i == 0 {
        return Err(Error::parse(line, column, "indices are 1-based"));
    }
    Ok(i)
}

fn expect_token(
    line: usize,
    toks: &[(usize, &str)],
    at: usize,
    want: &str,
    end_col: usize,
) -> Result<()> {
    match toks.get(at) {
        Some((_, t)) if *t == want => Ok(()),
        Some((c, t)) => Err(Error::parse(
            line,
            *c,
            format!("expected `{want}`, got `{t}`"),
        )),
        None => Err(Error::parse(line, end_col, format!("expected `{want}`"))),
    }
}

fn end_column(text: &str) -> usize {
    text.len() + 1
}

pub fn emit_finitary(a: &FinitaryOp) -> String {
    a.entries()
        .map(|((i, j), c)| format!("entry {i} {j} : {}\n", fmt_rational(c)))
        .collect()
}

pub fn emit_mackey(a: &MackeyOp) -> String {
    let mut out = String::from("mackey\n");
    for (d, s) in a.diags() {
        out.push_str(&format!("diag {d} : prefix"));
        for c in s.prefix() {
            out.push(' ');
            out.push_str(&fmt_rational(c));
        }
        out.push_str(&format!(" ; tail {}\n", fmt_rational(s.tail())));
    }
    out
}

pub fn emit_operator(op: &Operator) -> String {
    match op {
        Operator::Finitary(a) => emit_finitary(a),
        Operator::Mackey(a) => emit_mackey(a),
    }
}

fn finitary_from_lines(lines: &[Line]) -> Result<FinitaryOp> {
    let mut entries = Vec::new();
    for &(n, text) in lines {
        let toks = tokens(text);
        let end = end_column(text);
        expect_token(n, &toks, 0, "entry", end)?;
        let field = |k: usize, what: &str| {
            toks.get(k)
                .copied()
                .ok_or_else(|| Error::parse(n, end, format!("expected {what}")))
        };
        let (ci, i) = field(1, "row index")?;
        let (cj, j) = field(2, "column index")?;
        expect_token(n, &toks, 3, ":", end)?;
        let (cr, r) = field(4, "coefficient")?;
        if let Some((c, t)) = toks.get(5) {
            return Err(Error::parse(n, *c, format!("unexpected `{t}`")));
        }
        entries.push((
            (index_at(n, ci, i)?, index_at(n, cj, j)?),
            rational_at(n, cr, r)?,
        ));
    }
    Ok(FinitaryOp::from_entries(entries))
}

fn mackey_from_lines(lines: &[Line]) -> Result<MackeyOp> {
    let Some((&(n0, head), rest)) = lines.split_first() else {
        return Err(Error::parse(1, 1, "expected `mackey` header"));
    };
    let toks = tokens(head);
    expect_token(n0, &toks, 0, "mackey", end_column(head))?;
    if let Some((c, t)) = toks.get(1) {
        return Err(Error::parse(n0, *c, format!("unexpected `{t}`")));
    }
    let mut diags: BTreeMap<i64, DiagonalSeq> = BTreeMap::new();
    for &(n, text) in rest {
        let toks = tokens(text);
        let end = end_column(text);
        expect_token(n, &toks, 0, "diag", end)?;
        let (cd, d) = toks
            .get(1)
            .copied()
            .ok_or_else(|| Error::parse(n, end, "expected offset"))?;
        let d: i64 = d
            .parse()
            .map_err(|_| Error::parse(n, cd, format!("bad offset `{d}`")))?;
        expect_token(n, &toks, 2, ":", end)?;
        expect_token(n, &toks, 3, "prefix", end)?;
        let semi = toks[4..]
            .iter()
            .position(|(_, t)| *t == ";")
            .map(|p| p + 4)
            .ok_or_else(|| Error::parse(n, end, "expected `;`"))?;
        let prefix = toks[4..semi]
            .iter()
            .map(|&(c, t)| rational_at(n, c, t))
            .collect::<Result<Vec<_>>>()?;
        expect_token(n, &toks, semi + 1, "tail", end)?;
        let (ct, t) = toks
            .get(semi + 2)
            .copied()
            .ok_or_else(|| Error::parse(n, end, "expected tail value"))?;
        let tail = rational_at(n, ct, t)?;
        if let Some((c, t)) = toks.get(semi + 3) {
            return Err(Error::parse(n, *c, format!("unexpected `{t}`")));
        }
        if diags.insert(d, DiagonalSeq::new(prefix, tail)).is_some() {
            return Err(Error::parse(n, cd, format!("offset {d} given twice")));
        }
    }
    Ok(MackeyOp::from_diags(diags))
}

fn is_mackey(lines: &[Line]) -> bool {
    lines
        .first()
        .is_some_and(|(_, l)| tokens(l).first().is_some_and(|(_, t)| *t == "mackey"))
}

fn operator_from_lines(lines: &[Line]) -> Result<Operator> {
    if is_mackey(lines) {
        mackey_from_lines(lines).map(Operator::Mackey)
    } else {
        finitary_from_lines(lines).map(Operator::Finitary)
    }
}

/// Parses a finitary (`entry` lines) or Mackey (`mackey` header) operator.
pub fn parse_operator(text: &str) -> Result<Parsed<Operator>> {
    let op = operator_from_lines(&content_lines(text))?;
    let canonical = emit_operator(&op);
    Ok(Parsed::checked(op, text, canonical))
}

pub fn emit_pairing(spec: &PairingSpec) -> Result<String> {
    match spec {
        PairingSpec::StandardDual => Ok("pairing standard\n".into()),
        PairingSpec::Mackey(p) => Ok(format!("pairing mackey\n{}", emit_mackey(p))),
        PairingSpec::Oracle { .. } => Err(Error::Precondition(
            "oracle pairings have no text form".into(),
        )),
    }
}

pub fn parse_pairing(text: &str) -> Result<Parsed<PairingSpec>> {
    let lines = content_lines(text);
    let Some((&(n, head), rest)) = lines.split_first() else {
        return Err(Error::parse(1, 1, "expected `pairing` header"));
    };
    let toks = tokens(head);
    let end = end_column(head);
    expect_token(n, &toks, 0, "pairing", end)?;
    let spec = match toks.get(1) {
        Some((_, "standard")) => {
            if let Some(&(m, l)) = rest.first() {
                return Err(Error::parse(m, 1, format!("unexpected `{}`", l.trim())));
            }
            PairingSpec::StandardDual
        }
        Some((_, "mackey")) => PairingSpec::Mackey(mackey_from_lines(rest)?),
        Some((c, "oracle")) => {
            return Err(Error::parse(
                n,
                *c,
                "oracle pairings cannot be read from a file",
            ));
        }
        Some((c, t)) => return Err(Error::parse(n, *c, format!("unknown pairing kind `{t}`"))),
        None => return Err(Error::parse(n, end, "expected pairing kind")),
    };
    if let Some((c, t)) = toks.get(2) {
        return Err(Error::parse(n, *c, format!("unexpected `{t}`")));
    }
    let canonical = emit_pairing(&spec)?;
    Ok(Parsed::checked(spec, text, canonical))
}

pub fn emit_aut(h: &AutPresentation) -> String {
    format!(
        "aut\neps {}\ng:\n{}ginv:\n{}",
        u8::from(h.eps),
        emit_mackey(h.g.g()),
        emit_mackey(h.g.g_inv())
    )
}

/// Reads an `aut` file; `g` and `ginv` must be mutually inverse.
pub fn parse_aut(text: &str) -> Result<Parsed<AutPresentation>> {
    let lines = content_lines(text);
    let header = |k: usize, want: &str| -> Result<()> {
        match lines.get(k) {
            Some(&(n, l)) => expect_token(n, &tokens(l), 0, want, end_column(l)),
            None => Err(Error::parse(
                lines.last().map_or(1, |l| l.0 + 1),
                1,
                format!("expected `{want}`"),
            )),
        }
    };
    header(0, "aut")?;
    header(1, "eps")?;
    let (n, l) = lines[1];
    let toks = tokens(l);
    let eps = match toks.get(1) {
        Some((_, "0")) => false,
        Some((_, "1")) => true,
        Some((c, t)) => {
            return Err(Error::parse(
                n,
                *c,
                format!("eps must be 0 or 1, got `{t}`"),
            ))
        }
        None => return Err(Error::parse(n, end_column(l), "expected 0 or 1")),
    };
    header(2, "g:")?;
    let split = lines
        .iter()
        .position(|(_, l)| l.trim() == "ginv:")
        .ok_or_else(|| Error::parse(lines.last().map_or(1, |l| l.0 + 1), 1, "expected `ginv:`"))?;
    let g = mackey_from_lines(&lines[3..split])?;
    let g_inv = mackey_from_lines(&lines[split + 1..])?;
    let h = AutPresentation {
        g: InvertiblePair::new(g, g_inv)?,
        eps,
    };
    let canonical = emit_aut(&h);
    Ok(Parsed::checked(h, text, canonical))
}

/// One vector per line, in the `index:rational` form.
pub fn parse_vectors(text: &str) -> Result<Vec<FinVec>> {
    content_lines(text)
        .into_iter()
        .map(|(n, l)| {
            l.parse::<FinVec>().map_err(|e| match e {
                Error::Parse {
                    column, message, ..
                } => Error::parse(n, column, message),
                other => other,
            })
        })
        .collect()
}

pub fn emit_vectors(vs: &[FinVec]) -> String {
    vs.iter().map(|v| format!("{v}\n")).collect()
}

/// A scenario directive: a command line followed by an optional operand
/// block, written indented by two spaces.
#[derive(Clone, Debug, PartialEq)]
pub struct Directive {
    pub command: String,
    pub args: Vec<String>,
    pub block: Option<Operator>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ScenarioFile {
    pub directives: Vec<Directive>,
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Parsed<ScenarioFile>> {
        let mut directives: Vec<(Directive, Vec<Line>)> = Vec::new();
        for (n, line) in text.lines().enumerate().map(|(n, l)| (n + 1, l)) {
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            if line.starts_with(char::is_whitespace) {
                let Some((_, block)) = directives.last_mut() else {
                    return Err(Error::parse(n, 1, "operand block without a directive"));
                };
                block.push((n, line));
                continue;
            }
            let toks = tokens(line);
            let (command, args) = toks.split_first().expect("line is not blank");
            directives.push((
                Directive {
                    command: command.1.to_string(),
                    args: args.iter().map(|(_, t)| t.to_string()).collect(),
                    block: None,
                },
                Vec::new(),
            ));
        }
        let directives = directives
            .into_iter()
            .map(|(mut d, block)| {
                if !block.is_empty() {
                    d.block = Some(operator_from_lines(&block)?);
                }
                Ok(d)
            })
            .collect::<Result<Vec<_>>>()?;
        let file = ScenarioFile { directives };
        let canonical = file.emit();
        Ok(Parsed::checked(file, text, canonical))
    }

    pub fn emit(&self) -> String {
        let mut out = String::new();
        for d in &self.directives {
            out.push_str(&d.command);
            for a in &d.args {
                out.push(' ');
                out.push_str(a);
            }
            out.push('\n');
            if let Some(op) = &d.block {
                for l in emit_operator(op).lines() {
                    out.push_str("  ");
                    out.push_str(l);
                    out.push('\n');
                }
            }
        }
        out
    }
}

/// Runs a scenario: `op NAME` binds its operand block to `NAME`; `bracket`,
/// `mul`, `transpose` and `trace` append their results to `out`. Output of
/// directives before a failing one is kept.
pub fn run_scenario(file: &ScenarioFile, out: &mut String) -> Result<()> {
    let mut env: BTreeMap<&str, Operator> = BTreeMap::new();
    for (k, d) in file.directives.iter().enumerate() {
        let arg = |i: usize| -> Result<&Operator> {
            let name = d.args.get(i).ok_or_else(|| {
                Error::Precondition(format!(
                    "directive {}: `{}` needs an operand",
                    k + 1,
                    d.command
                ))
            })?;
            env.get(name.as_str()).ok_or_else(|| {
                Error::Precondition(format!("directive {}: unknown operator `{name}`", k + 1))
            })
        };
        match d.command.as_str() {
            "op" => {
                let name = d.args.first().ok_or_else(|| {
                    Error::Precondition(format!("directive {}: `op` needs a name", k + 1))
                })?;
                let op = d
                    .block
                    .clone()
                    .unwrap_or(Operator::Finitary(FinitaryOp::zero()));
                env.insert(name, op);
            }
            "bracket" => {
                let r = arg(0)?.combine(arg(1)?, |a, b| a.bracket(b), |a, b| a.bracket(b));
                out.push_str(&emit_operator(&r));
            }
            "mul" => {
                let r = arg(0)?.combine(arg(1)?, |a, b| a.mul(b), |a, b| a.mul(b));
                out.push_str(&emit_operator(&r));
            }
            "transpose" => {
                let r = match arg(0)? {
                    Operator::Finitary(a) => Operator::Finitary(a.transpose()),
                    Operator::Mackey(a) => Operator::Mackey(a.transpose()),
                };
                out.push_str(&emit_operator(&r));
            }
            "trace" => {
                out.push_str(&fmt_rational(&arg(0)?.trace()?));
                out.push('\n');
            }
            other => {
                return Err(Error::Precondition(format!(
                    "directive {}: unknown command `{other}`",
                    k + 1
                )));
            }
        }
    }
    Ok(())
}
