//! Terms over named operation symbols. JSON form: variables are `"x0"`,
//! `"x1"`, …; applications are arrays `["op", child, …]`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::tuples::Odometer;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(i: usize) -> Term {
        Term::Var(i)
    }

    pub fn app(op: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(op.into(), args)
    }

    /// One more than the largest variable index occurring in the term.
    pub fn var_bound(&self) -> usize {
        match self {
            Term::Var(i) => i + 1,
            Term::App(_, args) => args.iter().map(Term::var_bound).max().unwrap_or(0),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::node_count).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Replaces variable `i` by `subs[i]`.
    pub fn substitute(&self, subs: &[Term]) -> Term {
        match self {
            Term::Var(i) => subs[*i].clone(),
            Term::App(op, args) => {
                Term::App(op.clone(), args.iter().map(|a| a.substitute(subs)).collect())
            }
        }
    }

    /// Term built from `op` applied to variables `vars`.
    pub fn basic(op: impl Into<String>, vars: &[usize]) -> Term {
        Term::App(op.into(), vars.iter().map(|&v| Term::Var(v)).collect())
    }

    pub fn compile(&self, alg: &FiniteAlgebra) -> Result<CompiledTerm> {
        Ok(CompiledTerm {
            node: compile_node(self, alg)?,
            vars: self.var_bound(),
        })
    }

    pub fn eval(&self, alg: &FiniteAlgebra, assignment: &[usize]) -> Result<usize> {
        let compiled = self.compile(alg)?;
        if assignment.len() < compiled.vars {
            return Err(Error::invalid(format!(
                "term uses {} variables, assignment has {}",
                compiled.vars,
                assignment.len()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&a| a >= alg.size()) {
            return Err(Error::invalid(format!("element {bad} out of range")));
        }
        Ok(compiled.eval(alg, assignment))
    }

    pub fn to_json(&self) -> Value {
        match self {
            Term::Var(i) => Value::String(format!("x{i}")),
            Term::App(op, args) => {
                let mut v = vec![Value::String(op.clone())];
                v.extend(args.iter().map(Term::to_json));
                Value::Array(v)
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Term> {
        match v {
            Value::String(s) => s
                .strip_prefix('x')
                .and_then(|d| d.parse().ok())
                .map(Term::Var)
                .ok_or_else(|| Error::invalid(format!("bad variable {s:?}"))),
            Value::Array(items) => {
                let (head, rest) = items
                    .split_first()
                    .ok_or_else(|| Error::invalid("empty term array"))?;
                let op = head
                    .as_str()
                    .ok_or_else(|| Error::invalid("operation symbol must be a string"))?;
                if rest.is_empty() {
                    return Err(Error::invalid(format!("operation {op} without arguments")));
                }
                let args = rest.iter().map(Term::from_json).collect::<Result<_>>()?;
                Ok(Term::App(op.to_string(), args))
            }
            other => Err(Error::invalid(format!("unexpected term node {other}"))),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::App(op, args) => {
                write!(f, "{op}(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Term {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Term::from_json(&v).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug)]
enum Node {
    Var(usize),
    App(usize, Vec<Node>),
}

fn compile_node(t: &Term, alg: &FiniteAlgebra) -> Result<Node> {
    match t {
        Term::Var(i) => Ok(Node::Var(*i)),
        Term::App(op, args) => {
            let idx = alg
                .op_index(op)
                .ok_or_else(|| Error::invalid(format!("unknown operation symbol {op}")))?;
            let arity = alg.ops()[idx].arity;
            if arity != args.len() {
                return Err(Error::invalid(format!(
                    "operation {op} has arity {arity}, applied to {} arguments",
                    args.len()
                )));
            }
            let kids = args
                .iter()
                .map(|a| compile_node(a, alg))
                .collect::<Result<_>>()?;
            Ok(Node::App(idx, kids))
        }
    }
}

/// A term with operation symbols resolved against one algebra.
#[derive(Clone, Debug)]
pub struct CompiledTerm {
    node: Node,
    vars: usize,
}

impl CompiledTerm {
    pub fn var_bound(&self) -> usize {
        self.vars
    }

    pub fn eval(&self, alg: &FiniteAlgebra, assignment: &[usize]) -> usize {
        eval_node(&self.node, alg, assignment)
    }
}

fn eval_node(n: &Node, alg: &FiniteAlgebra, assignment: &[usize]) -> usize {
    match n {
        Node::Var(i) => assignment[*i],
        Node::App(op, kids) => {
            let mut args = [0usize; 16];
            if kids.len() <= 16 {
                for (slot, k) in args.iter_mut().zip(kids) {
                    *slot = eval_node(k, alg, assignment);
                }
                alg.eval(*op, &args[..kids.len()])
            } else {
                let v: Vec<usize> = kids.iter().map(|k| eval_node(k, alg, assignment)).collect();
                alg.eval(*op, &v)
            }
        }
    }
}

/// A single equation between two terms over the variables `0..vars`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    pub lhs: Term,
    pub rhs: Term,
}

impl Equation {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Equation { lhs, rhs }
    }

    pub fn var_bound(&self) -> usize {
        self.lhs.var_bound().max(self.rhs.var_bound())
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

/// A failing assignment for an equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquationFailure {
    pub equation: usize,
    pub assignment: Vec<usize>,
    pub lhs_value: usize,
    pub rhs_value: usize,
}

/// Checks every equation under every assignment of its variables in `alg`.
pub fn check_equations(eqs: &[Equation], alg: &FiniteAlgebra) -> Result<Option<EquationFailure>> {
    for (k, eq) in eqs.iter().enumerate() {
        let lhs = eq.lhs.compile(alg)?;
        let rhs = eq.rhs.compile(alg)?;
        let vars = eq.var_bound();
        let mut od = Odometer::uniform(vars, alg.size());
        while let Some(a) = od.next_tuple() {
            let l = lhs.eval(alg, a);
            let r = rhs.eval(alg, a);
            if l != r {
                return Ok(Some(EquationFailure {
                    equation: k,
                    assignment: a.to_vec(),
                    lhs_value: l,
                    rhs_value: r,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let t = Term::app("u", vec![Term::var(0), Term::basic("u", &[1, 2, 0]), Term::var(2)]);
        let v = t.to_json();
        assert_eq!(v.to_string(), r#"["u","x0",["u","x1","x2","x0"],"x2"]"#);
        assert_eq!(Term::from_json(&v).unwrap(), t);
        assert_eq!(t.var_bound(), 3);
        assert_eq!(t.depth(), 2);
        assert!(Term::from_json(&serde_json::json!(["u"])).is_err());
        assert!(Term::from_json(&serde_json::json!("y1")).is_err());
    }

    #[test]
    fn substitution() {
        let t = Term::basic("f", &[0, 1]);
        let s = t.substitute(&[Term::var(1), Term::basic("g", &[0, 0])]);
        assert_eq!(s.to_string(), "f(x1,g(x0,x0))");
    }
}
