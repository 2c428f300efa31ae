//! Line-oriented circuit text format.
//!
//! ```text
//! # comment
//! n 1
//! m 2
//! qubits 9
//! reg S 0 1          # name, first global index, width
//! reg R 1 2          # R_i = 1 + (i - 1), little-endian
//! reg PHI 3 2
//! reg A 5 2
//! reg B 7 2
//! STAGE W0
//! H 0
//! P 1 3              # diag(1, e^{2πi/2^1}) on qubit 3
//! STAGE W1
//! MCX +0 -2 5        # controls (+ fires on |1⟩, - on |0⟩), then target
//! ...
//! CMEAS 7 8          # measure 8 conditioned on 7; keep the |11⟩ branch
//! ```
//!
//! `PDG k q` (adjoint phase) and `X q` are accepted as well.

use std::fmt::Write;

use super::{Circuit, ControlledMeasurement, Stage, StageSpan};
use crate::error::{Error, Result};
use crate::gate::{Control, Gate};
use crate::layout::RegisterLayout;

pub(super) fn write_circuit(c: &Circuit) -> String {
    let l = c.layout();
    let mut out = String::new();
    out.push_str("# cmprep circuit\n");
    writeln!(out, "n {}", l.n()).unwrap();
    writeln!(out, "m {}", l.m()).unwrap();
    writeln!(out, "qubits {}", l.total()).unwrap();
    for (name, start, width) in registers(l) {
        writeln!(out, "reg {name} {start} {width}").unwrap();
    }
    for span in c.stages() {
        writeln!(out, "STAGE {}", span.stage).unwrap();
        for g in &c.gates()[span.range.clone()] {
            writeln!(out, "{g}").unwrap();
        }
    }
    let t = c.terminal();
    writeln!(out, "CMEAS {} {}", t.control, t.measured).unwrap();
    out
}

fn registers(l: &RegisterLayout) -> [(&'static str, usize, usize); 5] {
    [("S", l.s(1), l.n()), ("R", l.r(1), l.m()), ("PHI", l.phi(1), l.m()), ("A", l.a1(), 2), ("B", l.b1(), 2)]
}

/// Parses the output of [`Circuit::to_text`].
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut n = None;
    let mut m = None;
    let mut layout: Option<RegisterLayout> = None;
    let mut gates = Vec::new();
    let mut stages: Vec<StageSpan> = Vec::new();
    let mut terminal = None;

    for (lineno, raw) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let err = |msg: String| Error::Parse { line: lineno, msg };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if terminal.is_some() {
            return Err(err("content after CMEAS".into()));
        }
        let mut tok = line.split_whitespace();
        let head = tok.next().expect("non-empty line");
        let args: Vec<&str> = tok.collect();
        let num = |s: &str| s.parse::<usize>().map_err(|_| err(format!("expected an integer, found `{s}`")));
        let arity = |k: usize| {
            if args.len() == k {
                Ok(())
            } else {
                Err(err(format!("`{head}` takes {k} argument(s), found {}", args.len())))
            }
        };

        match head {
            "n" | "m" | "qubits" | "reg" if !stages.is_empty() => {
                return Err(err(format!("header line `{head}` after the first STAGE")));
            }
            "n" => {
                arity(1)?;
                n = Some(num(args[0])?);
            }
            "m" => {
                arity(1)?;
                m = Some(num(args[0])?);
            }
            "qubits" => {
                arity(1)?;
                let l = header_layout(n, m, &mut layout).map_err(err)?;
                if num(args[0])? != l.total() {
                    return Err(err(format!("qubits must be {}", l.total())));
                }
            }
            "reg" => {
                arity(3)?;
                let l = header_layout(n, m, &mut layout).map_err(err)?;
                let found = (num(args[1])?, num(args[2])?);
                let expected = registers(&l)
                    .into_iter()
                    .find(|r| r.0 == args[0])
                    .ok_or_else(|| err(format!("unknown register `{}`", args[0])))?;
                if found != (expected.1, expected.2) {
                    return Err(err(format!("register {} must be `{} {}`", expected.0, expected.1, expected.2)));
                }
            }
            "STAGE" => {
                arity(1)?;
                header_layout(n, m, &mut layout).map_err(err)?;
                let stage = Stage::from_name(args[0]).ok_or_else(|| err(format!("unknown stage `{}`", args[0])))?;
                if let Some(last) = stages.last_mut() {
                    last.range.end = gates.len();
                }
                stages.push(StageSpan { stage, range: gates.len()..gates.len() });
            }
            "CMEAS" => {
                arity(2)?;
                terminal = Some(ControlledMeasurement { control: num(args[0])?, measured: num(args[1])? });
            }
            _ => {
                if stages.is_empty() {
                    return Err(err(format!("gate `{head}` before the first STAGE")));
                }
                let gate = match head {
                    "H" => {
                        arity(1)?;
                        Gate::h(num(args[0])?)
                    }
                    "X" => {
                        arity(1)?;
                        Gate::x(num(args[0])?)
                    }
                    "P" | "PDG" => {
                        arity(2)?;
                        let k = args[0].parse::<u32>().map_err(|_| err(format!("bad phase order `{}`", args[0])))?;
                        Gate::PhaseK { target: num(args[1])?, k, adjoint: head == "PDG" }
                    }
                    "MCX" => {
                        let (target, controls) = args.split_last().ok_or_else(|| err("MCX needs a target".into()))?;
                        let controls = controls
                            .iter()
                            .map(|c| match c.split_at(1) {
                                ("+", q) => Ok(Control::pos(num(q)?)),
                                ("-", q) => Ok(Control::neg(num(q)?)),
                                _ => Err(err(format!("control `{c}` must start with + or -"))),
                            })
                            .collect::<Result<Vec<_>>>()?;
                        Gate::mcx(controls, num(target)?)
                    }
                    other => return Err(err(format!("unknown instruction `{other}`"))),
                };
                gates.push(gate);
            }
        }
    }

    let eof = |msg: &str| Error::Parse { line: text.lines().count(), msg: msg.into() };
    let layout = layout.ok_or_else(|| eof("missing header"))?;
    let terminal = terminal.ok_or_else(|| eof("missing CMEAS line"))?;
    if let Some(last) = stages.last_mut() {
        last.range.end = gates.len();
    }
    if terminal != (ControlledMeasurement { control: layout.b1(), measured: layout.b2() }) {
        return Err(eof("CMEAS must name B1 and B2"));
    }
    Circuit::from_parts(layout, gates, stages, terminal).map_err(|e| eof(&e.to_string()))
}

fn header_layout(
    n: Option<usize>,
    m: Option<usize>,
    layout: &mut Option<RegisterLayout>,
) -> std::result::Result<RegisterLayout, String> {
    if let Some(l) = layout {
        return Ok(*l);
    }
    let (Some(n), Some(m)) = (n, m) else {
        return Err("`n` and `m` must come first".into());
    };
    let l = RegisterLayout::new(n, m).map_err(|e| e.to_string())?;
    *layout = Some(l);
    Ok(l)
}
