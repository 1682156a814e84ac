//! Canonical text form of scripts; parsing it gives back the same tree.

use std::fmt::{self, Display, Formatter};

use super::ast::*;

fn join<T: Display>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

fn polys(items: &[PolyText]) -> String {
    items.iter().map(|p| p.text.as_str()).collect::<Vec<_>>().join(", ")
}

impl Display for Script {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        for s in &self.stmts {
            writeln!(f, "{}", s.kind)?;
        }
        Ok(())
    }
}

impl Display for StmtKind {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            StmtKind::Fixture(id) => write!(f, "fixture {id}"),
            StmtKind::Anchor(a) => write!(f, "anchor {}", quote(a)),
            StmtKind::KnownDiscrepancy { check, note } => write!(f, "known-discrepancy {check} {}", quote(note)),
            StmtKind::Ring { name, def: RingDef::Poly { p, vars, weights } } => {
                write!(f, "ring {name} = poly(")?;
                if let Some(p) = p {
                    write!(f, "p={p}, ")?;
                }
                write!(f, "vars=[{}]", vars.join(", "))?;
                if let Some(w) = weights {
                    write!(f, ", weights=[{}]", join(w))?;
                }
                f.write_str(")")
            }
            StmtKind::Ring { name, def: RingDef::Quotient { ambient, ideal } } => {
                write!(f, "ring {name} = {ambient} / {ideal}")
            }
            StmtKind::Ideal { name, gens, ring } => write!(f, "ideal {name} = ({}) in {ring}", polys(gens)),
            StmtKind::Module { name, def } => {
                write!(f, "module {name} = ")?;
                match def {
                    ModuleDef::Coker { ring, rows, twists } => {
                        let rows: Vec<String> = rows.iter().map(|r| format!("[{}]", polys(r))).collect();
                        write!(f, "coker {ring} [{}]", rows.join(", "))?;
                        if let Some((g, r)) = twists {
                            write!(f, " twists [{}] -> [{}]", join(g), join(r))?;
                        }
                        Ok(())
                    }
                    ModuleDef::Ideal { gens, ring } => write!(f, "ideal ({}) in {ring}", polys(gens)),
                    ModuleDef::Expr(e) => write!(f, "{e}"),
                }
            }
            StmtKind::Certify { name, property } => write!(f, "certify {name} {}", property.keyword()),
            StmtKind::Command(c) => write!(f, "{c}"),
            StmtKind::Expect(e) => {
                let value = serde_json::to_string(&e.value).map_err(|_| fmt::Error)?;
                write!(f, "expect {} = {value} {}", e.path.join("."), e.tag.keyword())
            }
        }
    }
}

fn quote(s: &str) -> String {
    serde_json::Value::String(s.to_string()).to_string()
}

/// An expression in argument position: tensor products get parentheses.
struct Operand<'a>(&'a Expr);

impl Display for Operand<'_> {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self.0 {
            Expr::Tensor(..) => write!(f, "({})", self.0),
            e => write!(f, "{e}"),
        }
    }
}

impl Display for Expr {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Name(n) => f.write_str(n),
            Expr::Tensor(a, b) => write!(f, "{a} ⊗ {}", Operand(b)),
            Expr::Dual(e) => write!(f, "{}*", Operand(e)),
            Expr::Call(name, args) => write!(f, "{name}({})", join(args)),
        }
    }
}

impl Display for Arg {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Expr(e) => write!(f, "{e}"),
            Arg::Int(i) => write!(f, "{i}"),
            Arg::List(l) => write!(f, "[{}]", join(l)),
        }
    }
}

impl Display for Command {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Command::Invariants { target, r } => {
                write!(f, "invariants {}", Operand(target))?;
                if let Some(r) = r {
                    write!(f, " r={r}")?;
                }
                Ok(())
            }
            Command::H { target, from, to } => {
                write!(f, "h {} {from}", Operand(target))?;
                if let Some(to) = to {
                    write!(f, "..{to}")?;
                }
                Ok(())
            }
            Command::Length { target } => write!(f, "length {}", Operand(target)),
            Command::Resolve { target, bound } => {
                write!(f, "resolve {}", Operand(target))?;
                if let Some(b) = bound {
                    write!(f, " bound {b}")?;
                }
                Ok(())
            }
            Command::Check { id, m, n, ideal, r } => {
                write!(f, "check {id} {}", Operand(m))?;
                if let Some(n) = n {
                    write!(f, " {}", Operand(n))?;
                }
                if let Some(a) = ideal {
                    write!(f, " ideal {a}")?;
                }
                if let Some(r) = r {
                    write!(f, " r={r}")?;
                }
                Ok(())
            }
            Command::DepthSeq { target, n, ideal } => {
                write!(f, "depthseq {}", Operand(target))?;
                if let Some(n) = n {
                    write!(f, " n={n}")?;
                }
                if let Some(a) = ideal {
                    write!(f, " ideal {a}")?;
                }
                Ok(())
            }
            Command::Explore { id, trials, seed, vars } => {
                write!(f, "explore {id} trials={trials}")?;
                if let Some(s) = seed {
                    write!(f, " seed={s}")?;
                }
                if let Some(v) = vars {
                    write!(f, " vars={v}")?;
                }
                Ok(())
            }
        }
    }
}
