//! The seeded property-check runner behind `liesys check`.
//!
//! Each property draws `cases` inputs from an RNG derived from the seed, the
//! property name and the case number, so any single case can be replayed.
//! The first failing case of a property is shrunk greedily and reported in
//! its canonical text form.

use std::fmt::Write as _;
use std::panic::{self, AssertUnwindSafe};

use num::{One, Zero};
use rand::Rng;

use crate::aut::{
    apply_aut, classify_presentation, compose_aut, retwist_act_v, tau, twist_act_v,
    AutPresentation, TwistKind,
};
use crate::base::{vec_pair_std, FinVec, Rational, Window};
use crate::cli::format::{
    emit_aut, emit_finitary, emit_mackey, emit_pairing, parse_operator, Operator,
};
use crate::dualize::gram_schmidt;
use crate::error::Error;
use crate::finitary::{
    act_tensor, act_v, act_vstar, bracket, trace, FinitaryOp, PureTensor, TensorElement,
};
use crate::gen::{self, CaseRng};
use crate::linalg::{EchelonBasis, Matrix};
use crate::mackey::{bracket_m, center_witness, dense_approx, CenterReport, MackeyOp};
use crate::pairing::{complement_subsystem, envelope, perp_in_window, PairingSpec, Side};

/// Suites accepted by [`run_suite`], besides `all`.
pub const SUITES: &[&str] = &["core", "pairing", "dualize", "finitary", "mackey", "aut"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub case: String,
    pub description: String,
    pub counterexample: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub suite: String,
    pub cases: usize,
    pub failures: Vec<Failure>,
    pub seed: u64,
    /// One `(name, passed)` entry per property, in execution order.
    pub properties: Vec<(String, bool)>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Test-anything-protocol text: a plan line, one `ok`/`not ok` line per
    /// property, and the shrunk counterexample under each failure.
    pub fn to_tap(&self) -> String {
        let mut out = format!("1..{}\n", self.properties.len());
        let mut failures = self.failures.iter();
        for (k, (name, ok)) in self.properties.iter().enumerate() {
            if *ok {
                let _ = writeln!(out, "ok {} - {name}", k + 1);
            } else {
                let f = failures.next().expect("one failure per failed property");
                let _ = writeln!(
                    out,
                    "not ok {} - {name}: {} ({})",
                    k + 1,
                    f.description,
                    f.case
                );
                for line in f.counterexample.lines() {
                    let _ = writeln!(out, "# {line}");
                }
            }
        }
        let _ = writeln!(
            out,
            "# suite {} seed {} cases {}: {} failed",
            self.suite,
            self.seed,
            self.cases,
            self.failures.len()
        );
        out
    }
}

/// Runs a named suite; `all` runs every suite in [`SUITES`] order.
pub fn run_suite(
    name: &str,
    seed: u64,
    window: Window,
    cases: usize,
) -> Result<CheckReport, Error> {
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    let mut runner = Runner {
        seed,
        window: window.n().max(2),
        cases,
        suite: String::new(),
        report: CheckReport {
            suite: name.to_string(),
            cases: 0,
            failures: Vec::new(),
            seed,
            properties: Vec::new(),
        },
    };
    for s in names {
        runner.suite = s.to_string();
        match s {
            "core" => core_suite(&mut runner),
            "pairing" => pairing_suite(&mut runner),
            "dualize" => dualize_suite(&mut runner),
            "finitary" => finitary_suite(&mut runner),
            "mackey" => mackey_suite(&mut runner),
            _ => aut_suite(&mut runner),
        }
    }
    Ok(runner.report)
}

/// Why a case did not pass.
enum Fail {
    /// The input does not meet the property's precondition.
    Discard,
    Bad(String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Bad(e.to_string())
    }
}

type Outcome = Result<(), Fail>;

fn ensure(cond: bool, msg: &str) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(Fail::Bad(msg.to_string()))
    }
}

/// An input that can be shrunk and printed.
trait Case: Clone {
    fn shrink(&self) -> Vec<Self> {
        Vec::new()
    }
    fn show(&self) -> String;
}

impl Case for Rational {
    fn shrink(&self) -> Vec<Self> {
        if self.is_zero() {
            Vec::new()
        } else if self.is_one() {
            vec![Rational::zero()]
        } else {
            vec![Rational::zero(), Rational::one()]
        }
    }
    fn show(&self) -> String {
        crate::base::fmt_rational(self)
    }
}

impl Case for FinVec {
    fn shrink(&self) -> Vec<Self> {
        let mut out = Vec::new();
        for (&i, c) in self.iter() {
            let mut v = self.clone();
            v.remove(&i);
            out.push(v);
            if !c.is_one() {
                let mut v = self.clone();
                v.remove(&i);
                v.add_term(i, Rational::one());
                out.push(v);
            }
        }
        out
    }
    fn show(&self) -> String {
        format!("vector {self}")
    }
}

impl Case for FinitaryOp {
    fn shrink(&self) -> Vec<Self> {
        let entries: Vec<_> = self.entries().map(|(&k, c)| (k, c.clone())).collect();
        let mut out = Vec::new();
        for k in 0..entries.len() {
            let mut rest = entries.clone();
            let (ij, c) = rest.remove(k);
            out.push(FinitaryOp::from_entries(rest.clone()));
            if !c.is_one() {
                rest.push((ij, Rational::one()));
                out.push(FinitaryOp::from_entries(rest));
            }
        }
        out
    }
    fn show(&self) -> String {
        let text = emit_finitary(self);
        if text.is_empty() {
            "finitary zero".into()
        } else {
            text.trim_end().to_string()
        }
    }
}

impl Case for MackeyOp {
    fn shrink(&self) -> Vec<Self> {
        let diags: Vec<_> = self.diags().map(|(d, s)| (d, s.clone())).collect();
        let mut out = Vec::new();
        for k in 0..diags.len() {
            let mut rest = diags.clone();
            let (d, s) = rest.remove(k);
            out.push(MackeyOp::from_diags(rest.clone()));
            if !s.tail().is_zero() {
                rest.push((
                    d,
                    crate::mackey::DiagonalSeq::new(s.prefix().to_vec(), Rational::zero()),
                ));
                out.push(MackeyOp::from_diags(rest.clone()));
                rest.pop();
            }
            if !s.prefix().is_empty() {
                let p = s.prefix()[..s.prefix().len() - 1].to_vec();
                rest.push((d, crate::mackey::DiagonalSeq::new(p, s.tail().clone())));
                out.push(MackeyOp::from_diags(rest));
            }
        }
        out
    }
    fn show(&self) -> String {
        emit_mackey(self).trim_end().to_string()
    }
}

impl Case for TensorElement {
    fn shrink(&self) -> Vec<Self> {
        let (p, q) = self.degree();
        self.coeffs()
            .iter()
            .map(|(key, c)| {
                let term = TensorElement::from_terms(
                    p,
                    q,
                    &[(
                        c.clone(),
                        key.v.iter().map(|&i| FinVec::basis(i)).collect(),
                        key.vstar.iter().map(|&j| FinVec::basis(j)).collect(),
                    )],
                )
                .expect("degree matches");
                self.sub(&term)
            })
            .collect()
    }
    fn show(&self) -> String {
        let (p, q) = self.degree();
        let terms: Vec<String> = self
            .coeffs()
            .iter()
            .map(|(k, c)| format!("{}*{:?}{:?}", crate::base::fmt_rational(c), k.v, k.vstar))
            .collect();
        format!("tensor ({p},{q}) {}", terms.join(" + "))
    }
}

impl Case for AutPresentation {
    fn show(&self) -> String {
        emit_aut(self).trim_end().to_string()
    }
}

impl Case for PairingSpec {
    fn show(&self) -> String {
        emit_pairing(self)
            .unwrap_or_else(|_| "pairing oracle".into())
            .trim_end()
            .to_string()
    }
}

impl<T: Case> Case for Vec<T> {
    fn shrink(&self) -> Vec<Self> {
        let mut out = Vec::new();
        for k in 0..self.len() {
            let mut v = self.clone();
            v.remove(k);
            out.push(v);
        }
        for (k, x) in self.iter().enumerate() {
            for y in x.shrink() {
                let mut v = self.clone();
                v[k] = y;
                out.push(v);
            }
        }
        out
    }
    fn show(&self) -> String {
        self.iter().map(Case::show).collect::<Vec<_>>().join("\n")
    }
}

macro_rules! tuple_case {
    ($($t:ident $i:tt),+) => {
        impl<$($t: Case),+> Case for ($($t,)+) {
            fn shrink(&self) -> Vec<Self> {
                let mut out = Vec::new();
                $(
                    for y in self.$i.shrink() {
                        let mut v = self.clone();
                        v.$i = y;
                        out.push(v);
                    }
                )+
                out
            }
            fn show(&self) -> String {
                [$(self.$i.show()),+].join("\n")
            }
        }
    };
}

tuple_case!(A 0, B 1);
tuple_case!(A 0, B 1, C 2);
tuple_case!(A 0, B 1, C 2, D 3);

/// Budget of shrink steps per failure.
const SHRINK_STEPS: usize = 200;

struct Runner {
    seed: u64,
    window: usize,
    cases: usize,
    suite: String,
    report: CheckReport,
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325_u64, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

fn run_check<T>(check: &impl Fn(&T) -> Outcome, x: &T) -> Outcome {
    panic::catch_unwind(AssertUnwindSafe(|| check(x))).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "unknown panic".into());
        Err(Fail::Bad(format!("panicked: {msg}")))
    })
}

impl Runner {
    fn case_rng(&self, name: &str, case: usize) -> CaseRng {
        let h = fnv1a(format!("{}/{name}", self.suite).as_bytes());
        gen::rng(self.seed ^ h ^ (case as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }

    fn property<T: Case>(
        &mut self,
        name: &str,
        cases: usize,
        gen: impl Fn(&mut CaseRng, usize) -> T,
        check: impl Fn(&T) -> Outcome,
    ) {
        let full = format!("{}/{name}", self.suite);
        self.report.cases += cases;
        for case in 0..cases {
            let x = gen(&mut self.case_rng(name, case), self.window);
            if let Err(Fail::Bad(msg)) = run_check(&check, &x) {
                let (x, msg) = shrink(x, msg, &check);
                self.report.failures.push(Failure {
                    case: format!("{full}#{case}"),
                    description: msg,
                    counterexample: x.show(),
                });
                self.report.properties.push((full, false));
                return;
            }
        }
        self.report.properties.push((full, true));
    }
}

fn shrink<T: Case>(mut x: T, mut msg: String, check: &impl Fn(&T) -> Outcome) -> (T, String) {
    let mut steps = 0;
    'outer: while steps < SHRINK_STEPS {
        for y in x.shrink() {
            steps += 1;
            if let Err(Fail::Bad(m)) = run_check(check, &y) {
                x = y;
                msg = m;
                continue 'outer;
            }
            if steps >= SHRINK_STEPS {
                break 'outer;
            }
        }
        break;
    }
    (x, msg)
}

fn core_suite(r: &mut Runner) {
    let n = r.cases;
    r.property(
        "field-axioms",
        n,
        |g, _| (gen::rational(g), gen::rational(g), gen::rational(g)),
        |(a, b, c)| {
            ensure((a + b) + c == a + (b + c), "addition is not associative")?;
            ensure(
                (a * b) * c == a * (b * c),
                "multiplication is not associative",
            )?;
            ensure(a * (b + c) == a * b + a * c, "distributivity fails")?;
            ensure(a + (-a) == Rational::zero(), "no additive inverse")?;
            ensure(
                a.is_zero() || a * a.recip() == Rational::one(),
                "no multiplicative inverse",
            )
        },
    );
    r.property(
        "pairing-bilinear",
        n,
        |g, w| {
            (
                gen::rational(g),
                gen::finvec(g, w, 4),
                gen::finvec(g, w, 4),
                gen::finvec(g, w, 4),
            )
        },
        |(a, v, v2, f)| {
            let lhs = vec_pair_std(&(&v.scale(a) + v2), f);
            ensure(
                lhs == a * vec_pair_std(v, f) + vec_pair_std(v2, f),
                "pairing is not linear",
            )
        },
    );
    r.property(
        "canonical-form",
        n,
        |g, w| (gen::finvec(g, w, 5), gen::finvec(g, w, 5)),
        |(v, x)| {
            let back = &(v + x) - x;
            ensure(
                back == *v && back.to_string() == v.to_string(),
                "v + x - x differs from v",
            )
        },
    );
}

/// Random independent vectors inside `1..=n`.
fn independent_vectors(g: &mut CaseRng, n: usize, k: usize) -> Vec<FinVec> {
    let mut span = EchelonBasis::new();
    let mut out = Vec::new();
    while out.len() < k {
        let v = gen::nonzero_finvec(g, n, 3);
        if span.insert(&v) {
            out.push(v);
        }
    }
    out
}

fn pairing_suite(r: &mut Runner) {
    let n = r.cases;
    let pw = |w: usize| w.min(8);
    r.property(
        "complement-rank",
        n,
        |g, w| {
            let k = g.gen_range(1..=pw(w).min(3));
            (
                gen::window_pairing(g, pw(w)),
                independent_vectors(g, pw(w), k),
            )
        },
        |(spec, u_f)| {
            let n = u_f.iter().map(FinVec::max_index).max().unwrap_or(1).max(2);
            let window = Window::new(n)?;
            let mut independent = EchelonBasis::new();
            if u_f.is_empty() || !u_f.iter().all(|u| independent.insert(u)) {
                return Err(Fail::Discard);
            }
            let sub = match complement_subsystem(spec, u_f, window) {
                Err(Error::DegenerateWithinWindow { .. }) => return Err(Fail::Discard),
                other => other?,
            };
            ensure(
                sub.gram().is_square() && sub.gram().is_invertible(),
                "gram is not invertible",
            )?;
            ensure(sub.dim() == u_f.len(), "dimension mismatch")?;
            let perp = perp_in_window(spec, Side::W, u_f, window)?;
            let mut span = EchelonBasis::new();
            for v in perp.iter().chain(sub.w_basis()) {
                span.insert(v);
            }
            ensure(
                span.rank() == n && perp.len() + sub.dim() == n,
                "perp and complement do not split the window",
            )
        },
    );
    r.property(
        "envelope-contains-inputs",
        n,
        |g, w| {
            let k = g.gen_range(1..=3);
            let half = (pw(w) / 2).max(1);
            (
                gen::window_pairing(g, pw(w)),
                (0..k)
                    .map(|_| gen::finitary(g, half, 3))
                    .collect::<Vec<_>>(),
            )
        },
        |(spec, elems)| {
            let Some(window) =
                Window::new(elems.iter().map(FinitaryOp::max_index).max().unwrap_or(1) * 2).ok()
            else {
                return Err(Fail::Discard);
            };
            let sub = match envelope(spec, elems, window) {
                Err(Error::DegenerateWithinWindow { .. }) => return Err(Fail::Discard),
                other => other?,
            };
            ensure(
                sub.gram().is_invertible(),
                "envelope gram is not invertible",
            )?;
            for a in elems {
                let c = sub
                    .express(a)
                    .ok_or_else(|| Fail::Bad("input not in U_f ⊗ W_f".into()))?;
                ensure(
                    sub.expand(&c) == *a,
                    "re-expression does not reproduce the input",
                )?;
            }
            Ok(())
        },
    );
}

fn dualize_suite(r: &mut Runner) {
    let n = r.cases.min(50);
    let dim = |w: usize| w.min(10);
    r.property(
        "biorthogonality",
        n,
        |g, w| gen::window_pairing(g, dim(w)),
        |spec| {
            let k = pairing_block(spec);
            let out = gram_schmidt(spec, k, k)?;
            ensure(
                out.biorthogonality(spec).is_identity(),
                "⟨ũ_i, w̃_j⟩ is not the identity",
            )
        },
    );
    r.property(
        "unit-triangular",
        n,
        |g, w| gen::window_pairing(g, dim(w)),
        |spec| {
            let k = pairing_block(spec);
            let out = gram_schmidt(spec, k, k)?;
            for (i, u) in out.u_rows.iter().enumerate() {
                ensure(
                    u.max_index() == i + 1 && u.coeff(&(i + 1)).is_one(),
                    "ũ_k is not unit-triangular",
                )?;
            }
            Ok(())
        },
    );
    r.property(
        "idempotence",
        n,
        |g, w| gen::window_pairing(g, dim(w)),
        |spec| {
            let k = pairing_block(spec);
            let out = gram_schmidt(spec, k, k)?;
            let again = gen::padded_pairing(&out.biorthogonality(spec));
            let out2 = gram_schmidt(&again, k, k)?;
            for i in 0..k {
                ensure(
                    out2.u_rows[i] == FinVec::basis(i + 1)
                        && out2.w_rows[i] == FinVec::basis(i + 1),
                    "dual bases are not reproduced",
                )?;
            }
            Ok(())
        },
    );
}

/// Size of the non-identity block of a padded pairing.
fn pairing_block(spec: &PairingSpec) -> usize {
    match spec {
        PairingSpec::Mackey(p) => p.prefix_extent().max(1),
        _ => 1,
    }
}

fn finitary_suite(r: &mut Runner) {
    let n = r.cases;
    let op = |g: &mut CaseRng, w: usize| gen::finitary(g, w, 6);
    r.property(
        "jacobi",
        n,
        |g, w| (op(g, w), op(g, w), op(g, w)),
        |(a, b, c)| {
            let j = bracket(a, &bracket(b, c))
                .add(&bracket(b, &bracket(c, a)))
                .add(&bracket(c, &bracket(a, b)));
            ensure(j.is_zero(), "Jacobi sum is nonzero")?;
            ensure(
                bracket(a, b) == bracket(b, a).scale(&-Rational::one()),
                "bracket is not antisymmetric",
            )
        },
    );
    r.property(
        "trace-of-bracket",
        n,
        |g, w| (op(g, w), op(g, w)),
        |(a, b)| {
            ensure(
                trace(&bracket(a, b)).is_zero(),
                "trace of a bracket is nonzero",
            )
        },
    );
    r.property(
        "module-V",
        n,
        |g, w| (op(g, w), op(g, w), gen::finvec(g, w, 4)),
        |(a, b, v)| {
            let lhs = act_v(&bracket(a, b), v);
            ensure(
                lhs == &act_v(a, &act_v(b, v)) - &act_v(b, &act_v(a, v)),
                "module axiom fails on V",
            )
        },
    );
    r.property(
        "module-Vstar",
        n,
        |g, w| (op(g, w), op(g, w), gen::finvec(g, w, 4)),
        |(a, b, x)| {
            let lhs = act_vstar(&bracket(a, b), x);
            ensure(
                lhs == &act_vstar(a, &act_vstar(b, x)) - &act_vstar(b, &act_vstar(a, x)),
                "module axiom fails on V_*",
            )
        },
    );
    r.property(
        "module-tensor",
        n,
        |g, w| {
            let (p, q) = [(2, 0), (1, 1), (2, 1)][g.gen_range(0..3)];
            (op(g, w), op(g, w), gen::tensor(g, p, q, w, 3))
        },
        |(a, b, t)| {
            let lhs = act_tensor(&bracket(a, b), t);
            let rhs = act_tensor(a, &act_tensor(b, t)).sub(&act_tensor(b, &act_tensor(a, t)));
            ensure(lhs == rhs, "module axiom fails on the tensor module")
        },
    );
    r.property(
        "duality-sign",
        n,
        |g, w| (op(g, w), gen::finvec(g, w, 4), gen::finvec(g, w, 4)),
        |(a, v, x)| {
            let s = vec_pair_std(&act_v(a, v), x) + vec_pair_std(v, &act_vstar(a, x));
            ensure(s.is_zero(), "⟨a·v, w⟩ + ⟨v, a·w⟩ is nonzero")
        },
    );
    r.property(
        "pure-tensor-bracket",
        n,
        |g, w| {
            (
                gen::finvec(g, w, 3),
                gen::finvec(g, w, 3),
                gen::finvec(g, w, 3),
                gen::finvec(g, w, 3),
            )
        },
        |(u, x, u2, x2)| {
            let lhs = bracket(
                &PureTensor::new(u.clone(), x.clone()).expand(),
                &PureTensor::new(u2.clone(), x2.clone()).expand(),
            );
            let rhs = PureTensor::new(u.scale(&vec_pair_std(u2, x)), x2.clone())
                .expand()
                .sub(&PureTensor::new(u2.scale(&vec_pair_std(u, x2)), x.clone()).expand());
            ensure(
                lhs == rhs,
                "bracket of pure tensors disagrees with the expansion",
            )
        },
    );
}

fn mk(g: &mut CaseRng) -> MackeyOp {
    gen::mackey(g, 5, 6)
}

fn mackey_suite(r: &mut Runner) {
    let n = r.cases;
    let window = r.window;
    r.property(
        "product-oracle",
        n,
        |g, _| (mk(g), mk(g)),
        move |(a, b)| {
            let reach = a
                .diags()
                .map(|(d, _)| d.unsigned_abs() as usize)
                .max()
                .unwrap_or(0);
            let p = a.mul(b);
            for i in 1..=window {
                for j in 1..=window {
                    let direct: Rational =
                        (1..=i + reach).map(|k| a.entry(i, k) * b.entry(k, j)).sum();
                    if p.entry(i, j) != direct {
                        return Err(Fail::Bad(format!(
                            "entry ({i},{j}) differs from the convolution"
                        )));
                    }
                }
            }
            Ok(())
        },
    );
    r.property(
        "congruence",
        n,
        |g, _| (mk(g), mk(g)),
        |(a, b)| {
            let reparse = |x: &MackeyOp| match parse_operator(&emit_mackey(x)).map(|p| p.value) {
                Ok(Operator::Mackey(y)) => Ok(y),
                _ => Err(Fail::Bad("canonical text does not parse back".into())),
            };
            let (a2, b2) = (reparse(a)?, reparse(b)?);
            ensure(a2 == *a && b2 == *b, "round trip changed the operator")?;
            ensure(
                a2.mul(&b2) == a.mul(b),
                "products of equal operators differ",
            )
        },
    );
    r.property(
        "finitary-ideal",
        n,
        |g, w| (mk(g), gen::finitary(g, w, 5)),
        |(a, f)| {
            ensure(
                bracket_m(a, &MackeyOp::from_finitary(f))
                    .to_finitary()
                    .is_some(),
                "bracket left the finitary ideal",
            )
        },
    );
    r.property(
        "transpose-anti",
        n,
        |g, _| (mk(g), mk(g)),
        |(a, b)| {
            ensure(
                a.mul(b).transpose() == b.transpose().mul(&a.transpose()),
                "(ab)ᵗ ≠ bᵗaᵗ",
            )
        },
    );
    r.property(
        "jacobi",
        n,
        |g, _| (mk(g), mk(g), mk(g)),
        |(a, b, c)| {
            let j = bracket_m(a, &bracket_m(b, c))
                .add(&bracket_m(b, &bracket_m(c, a)))
                .add(&bracket_m(c, &bracket_m(a, b)));
            ensure(j.is_zero(), "Jacobi sum is nonzero")
        },
    );
    r.property(
        "dense-approx",
        n,
        |g, w| {
            let k = g.gen_range(1..=4);
            (
                mk(g),
                (0..k)
                    .map(|_| gen::nonzero_finvec(g, w, 3))
                    .collect::<Vec<_>>(),
            )
        },
        |(a, rs)| {
            if rs.is_empty() {
                return Err(Fail::Discard);
            }
            let psi = dense_approx(a, rs)?;
            ensure(psi.trace().is_zero(), "approximation is not traceless")?;
            ensure(
                rs.iter().all(|v| act_v(&psi, v) == a.apply(v)),
                "approximation misses a vector",
            )
        },
    );
    r.property(
        "center",
        n,
        |g, _| (gen::non_scalar_mackey(g, 5, 6), gen::rational(g)),
        |(a, l)| {
            ensure(
                center_witness(&MackeyOp::scalar(l.clone())) == CenterReport::Scalar(l.clone()),
                "scalar not recognized",
            )?;
            if a.as_scalar().is_some() {
                return Err(Fail::Discard);
            }
            let w = center_witness(a);
            ensure(
                matches!(w, CenterReport::Witness { .. }) && w.verify(a),
                "no valid witness for a non-scalar",
            )
        },
    );
}

fn aut_suite(r: &mut Runner) {
    let n = r.cases;
    let pres = |g: &mut CaseRng| {
        let eps = g.gen_bool(0.5);
        gen::presentation(g, eps)
    };
    r.property(
        "homomorphism",
        n,
        |g, _| (pres(g), mk(g), mk(g)),
        |(h, a, b)| {
            ensure(
                apply_aut(h, &bracket_m(a, b)) == bracket_m(&apply_aut(h, a), &apply_aut(h, b)),
                "h does not preserve the bracket",
            )
        },
    );
    r.property(
        "compose-law",
        n,
        |g, _| (pres(g), pres(g), mk(g)),
        |(h1, h2, a)| {
            ensure(
                apply_aut(&compose_aut(h1, h2), a) == apply_aut(h1, &apply_aut(h2, a)),
                "compose(h1, h2) ≠ h1 ∘ h2",
            )
        },
    );
    r.property(
        "twist-functor",
        n,
        |g, w| (pres(g), pres(g), mk(g), gen::finvec(g, w, 4)),
        |(h1, h2, a, v)| {
            ensure(
                retwist_act_v(h1, h2, a, v) == twist_act_v(&compose_aut(h2, h1), a, v),
                "(V^h2)^h1 ≠ V^(h2 ∘ h1)",
            )
        },
    );
    r.property(
        "tau-involution",
        n,
        |g, _| (mk(g), mk(g)),
        |(a, b)| {
            ensure(tau(&tau(a)) == *a, "τ² ≠ id")?;
            ensure(
                tau(&bracket_m(a, b)) == bracket_m(&tau(a), &tau(b)),
                "τ does not preserve the bracket",
            )
        },
    );
    r.property(
        "tau-finitary",
        n,
        |g, _| mk(g),
        |a| {
            ensure(
                tau(a).to_finitary().is_some() == a.to_finitary().is_some(),
                "τ moved a across the finitary ideal",
            )
        },
    );
    r.property(
        "classification",
        n.min(6),
        |g, _| pres(g),
        |h| {
            let c = classify_presentation(h, Window::new(3)?, Window::new(23)?)?;
            let want = if h.eps {
                TwistKind::TypeVstar
            } else {
                TwistKind::TypeV
            };
            ensure(c.kind == want, "wrong twist type")?;
            ensure(
                c.verify(&|a| apply_aut(h, a)),
                "witness fails the intertwiner equations",
            )?;
            ensure(
                Matrix::is_invertible(&c.window_matrix()) || c.window.n() < 2,
                "witness block is singular",
            )
        },
    );
}
