//! The positive-CNF claiming game.
//!
//! Two players alternately pick an unassigned variable and give it their own
//! value. Once every variable is set, the True player wins iff the formula
//! holds.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Variables are numbered from 0; the text format numbers them from 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosCnf {
    pub variables: usize,
    pub clauses: Vec<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    True,
    False,
}

impl Side {
    pub fn opponent(self) -> Side {
        match self {
            Side::True => Side::False,
            Side::False => Side::True,
        }
    }

    pub fn value(self) -> bool {
        self == Side::True
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if self.value() { "true" } else { "false" })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosCnfGame {
    pub formula: PosCnf,
    pub assignment: Vec<Option<bool>>,
    pub to_move: Side,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosCnfError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: negative literal {literal}")]
    NegativeLiteral { line: usize, literal: i64 },
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
    #[error("variable {0} is already assigned")]
    AlreadyAssigned(usize),
    #[error("variable {0} does not exist")]
    UnknownVariable(usize),
    #[error("assignment is incomplete")]
    Incomplete,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosCnfSolution {
    pub winner: Side,
    /// Lowest-numbered variable that keeps the outcome; `None` once all are set.
    pub principal: Option<usize>,
}

impl PosCnf {
    pub fn new(variables: usize, clauses: Vec<Vec<usize>>) -> Self {
        PosCnf { variables, clauses }
    }
}

/// Parses `p poscnf n m` followed by `m` clauses of positive variable
/// numbers, each terminated by `0`. Lines starting with `c` are comments.
pub fn parse_formula(text: &str) -> Result<PosCnf, PosCnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    let mut current_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('c') {
            continue;
        }
        if t.starts_with('p') {
            let parts: Vec<&str> = t.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "poscnf", n, m] => n.parse().ok().zip(m.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or(PosCnfError::Parse { line, message: format!("bad header {t:?}") })?);
            continue;
        }
        let (n, _) = header.ok_or(PosCnfError::Parse { line, message: "clause before header".into() })?;
        for tok in t.split_whitespace() {
            let lit: i64 =
                tok.parse().map_err(|_| PosCnfError::Parse { line, message: format!("bad literal {tok:?}") })?;
            if lit < 0 {
                return Err(PosCnfError::NegativeLiteral { line, literal: lit });
            }
            if current.is_empty() {
                current_line = line;
            }
            if lit == 0 {
                if current.is_empty() {
                    return Err(PosCnfError::EmptyClause { line });
                }
                current.sort_unstable();
                current.dedup();
                clauses.push(std::mem::take(&mut current));
            } else {
                if lit as usize > n {
                    return Err(PosCnfError::Parse { line, message: format!("variable {lit} exceeds {n}") });
                }
                current.push(lit as usize - 1);
            }
        }
    }
    let (n, m) = header.ok_or(PosCnfError::Parse { line: 1, message: "missing header".into() })?;
    if !current.is_empty() {
        return Err(PosCnfError::Parse { line: current_line, message: "clause not terminated by 0".into() });
    }
    if clauses.len() != m {
        return Err(PosCnfError::Parse {
            line: text.lines().count().max(1),
            message: format!("header promises {m} clauses, found {}", clauses.len()),
        });
    }
    Ok(PosCnf { variables: n, clauses })
}

pub fn format_formula(f: &PosCnf) -> String {
    let mut out = format!("p poscnf {} {}\n", f.variables, f.clauses.len());
    for c in &f.clauses {
        for v in c {
            out.push_str(&format!("{} ", v + 1));
        }
        out.push_str("0\n");
    }
    out
}

impl PosCnfGame {
    pub fn new(formula: PosCnf, to_move: Side) -> Self {
        let n = formula.variables;
        PosCnfGame { formula, assignment: vec![None; n], to_move }
    }
}

pub fn apply_assignment(game: &PosCnfGame, variable: usize) -> Result<PosCnfGame, PosCnfError> {
    assign(game, variable, game.to_move.value())
}

/// Assigns an arbitrary value; only the permissive solver uses this.
pub fn assign(game: &PosCnfGame, variable: usize, value: bool) -> Result<PosCnfGame, PosCnfError> {
    match game.assignment.get(variable) {
        None => Err(PosCnfError::UnknownVariable(variable)),
        Some(Some(_)) => Err(PosCnfError::AlreadyAssigned(variable)),
        Some(None) => {
            let mut next = game.clone();
            next.assignment[variable] = Some(value);
            next.to_move = game.to_move.opponent();
            Ok(next)
        }
    }
}

pub fn evaluate(formula: &PosCnf, assignment: &[Option<bool>]) -> Result<bool, PosCnfError> {
    if assignment.iter().any(Option::is_none) {
        return Err(PosCnfError::Incomplete);
    }
    Ok(formula.clauses.iter().all(|c| c.iter().any(|&v| assignment[v] == Some(true))))
}

/// Decided early: every clause already has a True member, or some clause is
/// entirely False.
fn settled(formula: &PosCnf, a: &[Option<bool>]) -> Option<bool> {
    if formula.clauses.iter().any(|c| c.iter().all(|&v| a[v] == Some(false))) {
        return Some(false);
    }
    if formula.clauses.iter().all(|c| c.iter().any(|&v| a[v] == Some(true))) {
        return Some(true);
    }
    None
}

struct Solver<'a> {
    formula: &'a PosCnf,
    permissive: bool,
    memo: HashMap<(Vec<Option<bool>>, Side), bool>,
}

impl Solver<'_> {
    /// Does the formula end up true under optimal play?
    fn value(&mut self, a: &mut Vec<Option<bool>>, mover: Side) -> bool {
        if let Some(v) = settled(self.formula, a) {
            return v;
        }
        let key = (a.clone(), mover);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let want = mover.value();
        let values: &[bool] = if self.permissive { &[true, false] } else { &[want] };
        let mut result = !want;
        'outer: for v in 0..a.len() {
            if a[v].is_some() {
                continue;
            }
            for &val in values {
                a[v] = Some(val);
                let r = self.value(a, mover.opponent());
                a[v] = None;
                if r == want {
                    result = want;
                    break 'outer;
                }
            }
        }
        self.memo.insert(key, result);
        result
    }
}

pub fn solve_poscnf(game: &PosCnfGame) -> PosCnfSolution {
    solve_inner(game, false)
}

/// As [`solve_poscnf`] but a player may also assign the opponent's value.
pub fn solve_poscnf_permissive(game: &PosCnfGame) -> PosCnfSolution {
    solve_inner(game, true)
}

fn solve_inner(game: &PosCnfGame, permissive: bool) -> PosCnfSolution {
    let mut s = Solver { formula: &game.formula, permissive, memo: HashMap::new() };
    let mut a = game.assignment.clone();
    let truth = s.value(&mut a, game.to_move);
    let winner = if truth { Side::True } else { Side::False };
    let free: Vec<usize> = (0..a.len()).filter(|&v| a[v].is_none()).collect();
    let want = game.to_move.value();
    let principal = free
        .iter()
        .copied()
        .find(|&v| {
            a[v] = Some(want);
            let r = s.value(&mut a, game.to_move.opponent());
            a[v] = None;
            r == want
        })
        .or(free.first().copied());
    PosCnfSolution { winner, principal }
}
