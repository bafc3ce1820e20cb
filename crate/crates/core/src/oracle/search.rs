use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use super::{enumerate_fp, fp_eval_op, FpValue, RoundingMode};
use crate::format::FpFormat;
use crate::ia::{FpaOp, Rel};
use crate::smt::{to_nnf, FpaFormula, FpaTerm, RmSlot};
use crate::Error;

/// Largest search space, in assignments times enumerated modes.
pub const SEARCH_LIMIT: f64 = 1e8;

/// Rounding modes for every site of a formula. Unspecified sites are
/// numbered in left-to-right order of appearance.
#[derive(Clone, Debug, Default)]
pub struct ModeMap {
    pub named: HashMap<String, RoundingMode>,
    pub sites: Vec<RoundingMode>,
}

struct TermEval<'a> {
    assignment: &'a HashMap<String, FpValue>,
    modes: &'a ModeMap,
    next_site: usize,
}

impl TermEval<'_> {
    fn term(&mut self, t: &FpaTerm) -> Result<FpValue, Error> {
        Ok(match t {
            FpaTerm::Literal(..) | FpaTerm::Const { .. } => t.constant_value().expect("constant"),
            FpaTerm::Var(name, _) => *self
                .assignment
                .get(name)
                .ok_or_else(|| Error::MissingAssignment(name.clone()))?,
            FpaTerm::Unary(op, a) => {
                let a = self.term(a)?;
                fp_eval_op(*op, RoundingMode::RNE, a, a, t.format())
            }
            FpaTerm::Binary(op, rm, a, b) => {
                let mode =
                    match rm {
                        RmSlot::Concrete(m) => *m,
                        RmSlot::Var(name) => *self
                            .modes
                            .named
                            .get(name)
                            .ok_or_else(|| Error::MissingAssignment(name.clone()))?,
                        RmSlot::Unspecified => {
                            let k = self.next_site;
                            self.next_site += 1;
                            *self.modes.sites.get(k).ok_or_else(|| {
                                Error::MissingAssignment(format!("rounding site {k}"))
                            })?
                        }
                    };
                let (a, b) = (self.term(a)?, self.term(b)?);
                fp_eval_op(*op, mode, a, b, t.format())
            }
        })
    }

    fn formula(&mut self, phi: &FpaFormula) -> Result<bool, Error> {
        Ok(match phi {
            FpaFormula::Atom(rel, a, b) => {
                let fmt = a.format();
                let (a, b) = (self.term(a)?, self.term(b)?);
                compare(*rel, a, b, fmt)
            }
            FpaFormula::Not(g) => !self.formula(g)?,
            FpaFormula::And(gs) => {
                let mut all = true;
                for g in gs {
                    all &= self.formula(g)?;
                }
                all
            }
            FpaFormula::Or(gs) => {
                let mut any = false;
                for g in gs {
                    any |= self.formula(g)?;
                }
                any
            }
        })
    }
}

fn compare(rel: Rel, a: FpValue, b: FpValue, fmt: FpFormat) -> bool {
    match rel {
        Rel::SeqEq => a.seq_eq(b),
        Rel::FpEq => a.fp_eq(b, fmt),
        Rel::Ge => a.fp_cmp(b, fmt).is_some_and(|o| o.is_ge()),
        Rel::Gt => a.fp_cmp(b, fmt).is_some_and(|o| o.is_gt()),
    }
}

pub fn fp_eval_term(
    t: &FpaTerm,
    assignment: &HashMap<String, FpValue>,
    modes: &ModeMap,
) -> Result<FpValue, Error> {
    TermEval {
        assignment,
        modes,
        next_site: 0,
    }
    .term(t)
}

/// Truth of `phi` under SMT-LIB floating-point semantics.
pub fn fp_eval_formula(
    phi: &FpaFormula,
    assignment: &HashMap<String, FpValue>,
    modes: &ModeMap,
) -> Result<bool, Error> {
    TermEval {
        assignment,
        modes,
        next_site: 0,
    }
    .formula(phi)
}

/// All values of a format with precomputed operator tables.
pub(crate) struct Universe {
    pub fmt: FpFormat,
    pub values: Vec<FpValue>,
    index: HashMap<FpValue, u32>,
    /// Position in the numeric order, zeros merged; `None` for NaN.
    rank: Vec<Option<u32>>,
    tables: Option<Vec<u32>>,
}

const TABLE_LIMIT: usize = 600;

impl Universe {
    fn build(fmt: FpFormat) -> Result<Self, Error> {
        let values = enumerate_fp(fmt)?;
        let index = values
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, i as u32))
            .collect();
        let mut rank = Vec::with_capacity(values.len());
        let mut r = 0u32;
        for (i, v) in values.iter().enumerate() {
            if v.is_nan() {
                rank.push(None);
                continue;
            }
            if i > 0 && !(values[i - 1].is_zero() && v.is_zero()) {
                r += 1;
            }
            rank.push(Some(r));
        }
        let mut u = Universe {
            fmt,
            values,
            index,
            rank,
            tables: None,
        };
        let n = u.values.len();
        if n <= TABLE_LIMIT {
            let mut tables = Vec::with_capacity(20 * n * n);
            for op in FpaOp::BINARY {
                for mode in RoundingMode::ALL {
                    for a in &u.values {
                        for b in &u.values {
                            tables.push(u.index[&fp_eval_op(op, mode, *a, *b, fmt)]);
                        }
                    }
                }
            }
            u.tables = Some(tables);
        }
        Ok(u)
    }

    pub fn get(fmt: FpFormat) -> Result<Arc<Universe>, Error> {
        static CACHE: OnceLock<Mutex<HashMap<FpFormat, Arc<Universe>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(u) = cache.lock().expect("cache poisoned").get(&fmt) {
            return Ok(u.clone());
        }
        let u = Arc::new(Universe::build(fmt)?);
        cache.lock().expect("cache poisoned").insert(fmt, u.clone());
        Ok(u)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn index_of(&self, v: FpValue) -> u32 {
        self.index[&v]
    }

    fn op(&self, op: FpaOp, mode: RoundingMode, a: u32, b: u32) -> u32 {
        let n = self.values.len();
        match (&self.tables, op) {
            (_, FpaOp::Neg | FpaOp::Abs) => {
                let v = self.values[a as usize];
                self.index[&if op == FpaOp::Neg { v.neg() } else { v.abs() }]
            }
            (Some(t), _) => {
                let o = FpaOp::BINARY.iter().position(|x| *x == op).expect("binary");
                let m = RoundingMode::ALL
                    .iter()
                    .position(|x| *x == mode)
                    .expect("mode");
                t[((o * 5 + m) * n + a as usize) * n + b as usize]
            }
            (None, _) => {
                let r = fp_eval_op(
                    op,
                    mode,
                    self.values[a as usize],
                    self.values[b as usize],
                    self.fmt,
                );
                self.index[&r]
            }
        }
    }

    fn compare(&self, rel: Rel, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.rank[a as usize], self.rank[b as usize]);
        match rel {
            Rel::SeqEq => a == b,
            Rel::FpEq => ra.is_some() && ra == rb,
            Rel::Ge => matches!((ra, rb), (Some(x), Some(y)) if x >= y),
            Rel::Gt => matches!((ra, rb), (Some(x), Some(y)) if x > y),
        }
    }
}

#[derive(Clone, Copy)]
enum ModeSel {
    Fixed(RoundingMode),
    Any,
    Shared(usize),
}

enum CTerm {
    Var(usize),
    Const(u32),
    Un(FpaOp, Box<CTerm>),
    Bin(FpaOp, ModeSel, Box<CTerm>, Box<CTerm>),
}

struct CLit {
    rel: Rel,
    positive: bool,
    lhs: CTerm,
    rhs: CTerm,
    level: Option<usize>,
}

enum CForm {
    Lit(usize),
    And(Vec<CForm>),
    Or(Vec<CForm>),
}

struct Compiler<'a> {
    universe: &'a Universe,
    vars: BTreeMap<String, usize>,
    shared: BTreeMap<String, usize>,
    lits: Vec<CLit>,
}

impl Compiler<'_> {
    fn term(&self, t: &FpaTerm, deps: &mut Option<usize>) -> CTerm {
        match t {
            FpaTerm::Literal(..) | FpaTerm::Const { .. } => CTerm::Const(
                self.universe
                    .index_of(t.constant_value().expect("constant")),
            ),
            FpaTerm::Var(name, _) => {
                let i = self.vars[name];
                *deps = Some(deps.map_or(i, |d| d.max(i)));
                CTerm::Var(i)
            }
            FpaTerm::Unary(op, a) => CTerm::Un(*op, Box::new(self.term(a, deps))),
            FpaTerm::Binary(op, rm, a, b) => {
                let sel = match rm {
                    RmSlot::Concrete(m) => ModeSel::Fixed(*m),
                    RmSlot::Var(name) => self
                        .shared
                        .get(name)
                        .map_or(ModeSel::Any, |k| ModeSel::Shared(*k)),
                    RmSlot::Unspecified => ModeSel::Any,
                };
                CTerm::Bin(
                    *op,
                    sel,
                    Box::new(self.term(a, deps)),
                    Box::new(self.term(b, deps)),
                )
            }
        }
    }

    fn formula(&mut self, phi: &FpaFormula, positive: bool) -> CForm {
        match phi {
            FpaFormula::Atom(rel, a, b) => {
                let mut level = None;
                let lhs = self.term(a, &mut level);
                let rhs = self.term(b, &mut level);
                self.lits.push(CLit {
                    rel: *rel,
                    positive,
                    lhs,
                    rhs,
                    level,
                });
                CForm::Lit(self.lits.len() - 1)
            }
            FpaFormula::Not(g) => self.formula(g, !positive),
            FpaFormula::And(gs) => {
                CForm::And(gs.iter().map(|g| self.formula(g, positive)).collect())
            }
            FpaFormula::Or(gs) => CForm::Or(gs.iter().map(|g| self.formula(g, positive)).collect()),
        }
    }
}

/// Values a term can take when every free site may pick any mode.
fn term_set(u: &Universe, t: &CTerm, vars: &[u32], shared: &[RoundingMode]) -> Vec<u32> {
    match t {
        CTerm::Var(i) => vec![vars[*i]],
        CTerm::Const(c) => vec![*c],
        CTerm::Un(op, a) => {
            let mut out: Vec<u32> = term_set(u, a, vars, shared)
                .into_iter()
                .map(|x| u.op(*op, RoundingMode::RNE, x, x))
                .collect();
            out.sort_unstable();
            out.dedup();
            out
        }
        CTerm::Bin(op, sel, a, b) => {
            let (sa, sb) = (term_set(u, a, vars, shared), term_set(u, b, vars, shared));
            let modes: &[RoundingMode] = match sel {
                ModeSel::Fixed(m) => std::slice::from_ref(m),
                ModeSel::Shared(k) => std::slice::from_ref(&shared[*k]),
                ModeSel::Any => &RoundingMode::ALL,
            };
            let mut out = Vec::with_capacity(sa.len() * sb.len() * modes.len());
            for &m in modes {
                for &x in &sa {
                    for &y in &sb {
                        out.push(u.op(*op, m, x, y));
                    }
                }
            }
            out.sort_unstable();
            out.dedup();
            out
        }
    }
}

/// Whether some choice of free modes makes the literal true.
fn lit_possible(u: &Universe, lit: &CLit, vars: &[u32], shared: &[RoundingMode]) -> bool {
    let (sa, sb) = (
        term_set(u, &lit.lhs, vars, shared),
        term_set(u, &lit.rhs, vars, shared),
    );
    sa.iter()
        .any(|&a| sb.iter().any(|&b| u.compare(lit.rel, a, b) == lit.positive))
}

fn eval3(f: &CForm, lits: &[Option<bool>]) -> Option<bool> {
    match f {
        CForm::Lit(i) => lits[*i],
        CForm::And(gs) => {
            let mut unknown = false;
            for g in gs {
                match eval3(g, lits) {
                    Some(false) => return Some(false),
                    None => unknown = true,
                    Some(true) => {}
                }
            }
            if unknown {
                None
            } else {
                Some(true)
            }
        }
        CForm::Or(gs) => {
            let mut unknown = false;
            for g in gs {
                match eval3(g, lits) {
                    Some(true) => return Some(true),
                    None => unknown = true,
                    Some(false) => {}
                }
            }
            if unknown {
                None
            } else {
                Some(false)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Sat,
    Unsat,
}

/// Outcome of [`brute_force_check`] with a witness for satisfiable formulas.
#[derive(Clone, Debug)]
pub struct BruteForce {
    pub verdict: OracleVerdict,
    /// Variable values; variables absent from the map are unconstrained.
    pub witness: BTreeMap<String, FpValue>,
    pub shared_modes: BTreeMap<String, RoundingMode>,
}

struct Search<'a> {
    u: &'a Universe,
    lits: &'a [CLit],
    form: &'a CForm,
    by_level: Vec<Vec<usize>>,
    nvars: usize,
}

impl Search<'_> {
    fn run(
        &self,
        shared: &[RoundingMode],
        vals: &mut Vec<Option<bool>>,
        vars: &mut Vec<u32>,
    ) -> bool {
        let depth = vars.len();
        if depth > 0 {
            for &i in &self.by_level[depth - 1] {
                vals[i] = Some(lit_possible(self.u, &self.lits[i], vars, shared));
            }
        }
        let verdict = match eval3(self.form, vals) {
            Some(v) => v,
            None if depth == self.nvars => unreachable!("all literals decided at full depth"),
            None => {
                let mut found = false;
                for x in 0..self.u.len() as u32 {
                    vars.push(x);
                    found = self.run(shared, vals, vars);
                    if found {
                        break;
                    }
                    vars.pop();
                }
                found
            }
        };
        if depth > 0 {
            for &i in &self.by_level[depth - 1] {
                vals[i] = None;
            }
        }
        verdict
    }
}

/// Decides `phi` over `fmt` by exhaustive search.
///
/// Rounding sites that are unspecified, or named by a mode variable used
/// only once, range over all five modes independently. Mode variables used
/// more than once are enumerated jointly.
pub fn brute_force_check(phi: &FpaFormula, fmt: FpFormat) -> Result<BruteForce, Error> {
    let nnf = to_nnf(phi);
    let vars: Vec<String> = nnf.free_vars().into_iter().map(|(n, _)| n).collect();
    let mut uses: BTreeMap<String, usize> = BTreeMap::new();
    nnf.visit_terms(&mut |t| {
        if let FpaTerm::Binary(_, RmSlot::Var(name), ..) = t {
            *uses.entry(name.clone()).or_default() += 1;
        }
    });
    let shared_names: Vec<String> = uses
        .into_iter()
        .filter(|(_, n)| *n > 1)
        .map(|(k, _)| k)
        .collect();
    let u = Universe::get(fmt)?;
    let space = (u.len() as f64).powi(vars.len() as i32) * 5f64.powi(shared_names.len() as i32);
    if space > SEARCH_LIMIT {
        return Err(Error::Exhaustion {
            what: "brute-force search",
            limit: SEARCH_LIMIT,
        });
    }
    if let Some(f) = nnf.formats().into_iter().find(|f| *f != fmt) {
        return Err(Error::Sort {
            line: 0,
            col: 0,
            message: format!("formula uses {f}, search runs over {fmt}"),
        });
    }
    let mut c = Compiler {
        universe: &u,
        vars: vars
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect(),
        shared: shared_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect(),
        lits: Vec::new(),
    };
    let form = c.formula(&nnf, true);
    let lits = c.lits;
    let mut by_level = vec![Vec::new(); vars.len()];
    let mut ground = Vec::new();
    for (i, l) in lits.iter().enumerate() {
        match l.level {
            Some(d) => by_level[d].push(i),
            None => ground.push(i),
        }
    }
    let search = Search {
        u: &u,
        lits: &lits,
        form: &form,
        by_level,
        nvars: vars.len(),
    };
    let combos = 5usize.pow(shared_names.len() as u32);
    for combo in 0..combos {
        let shared: Vec<RoundingMode> = (0..shared_names.len())
            .map(|k| RoundingMode::ALL[(combo / 5usize.pow(k as u32)) % 5])
            .collect();
        let mut vals = vec![None; lits.len()];
        for &i in &ground {
            vals[i] = Some(lit_possible(&u, &lits[i], &[], &shared));
        }
        let mut assigned = Vec::with_capacity(vars.len());
        if search.run(&shared, &mut vals, &mut assigned) {
            let witness = vars
                .iter()
                .zip(&assigned)
                .map(|(n, i)| (n.clone(), u.values[*i as usize]))
                .collect();
            let shared_modes = shared_names
                .iter()
                .cloned()
                .zip(shared.iter().copied())
                .collect();
            return Ok(BruteForce {
                verdict: OracleVerdict::Sat,
                witness,
                shared_modes,
            });
        }
    }
    Ok(BruteForce {
        verdict: OracleVerdict::Unsat,
        witness: BTreeMap::new(),
        shared_modes: BTreeMap::new(),
    })
}
