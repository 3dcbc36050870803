//! Circuit intermediate representation, gate-count and depth metrics, and
//! the structured/diagram serializations.

use crate::field::PrimeField;
use crate::{Error, Result};

/// Which phase of a reduction stage a gate belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StagePhase {
    T,
    A,
    F,
}

impl std::fmt::Display for StagePhase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StagePhase::T => write!(f, "T"),
            StagePhase::A => write!(f, "A"),
            StagePhase::F => write!(f, "F"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GateOp {
    /// A named single-qudit gate from the synthesis gate set.
    Single { name: String, qudit: usize },
    Add { control: usize, target: usize },
    Swap { a: usize, b: usize },
    DftInverse { qudit: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub op: GateOp,
    /// Reduction row this gate belongs to; the final inverse-DFT layer is
    /// tagged with the last row index.
    pub row: usize,
    pub phase: StagePhase,
}

impl Gate {
    pub fn wires(&self) -> Vec<usize> {
        match &self.op {
            GateOp::Single { qudit, .. } | GateOp::DftInverse { qudit } => vec![*qudit],
            GateOp::Add { control, target } => vec![*control, *target],
            GateOp::Swap { a, b } => vec![*a, *b],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    pub field: PrimeField,
    pub n: usize,
    pub code_label: String,
    pub gateset_label: String,
    pub gates: Vec<Gate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Metrics {
    /// Primitive single-qudit gates in T stages only; the comparable count.
    pub single_qudit_count: u64,
    /// Including the final inverse-DFT layer.
    pub single_qudit_count_total: u64,
    pub two_qudit_count: u64,
    pub depth: u64,
}

impl Circuit {
    pub fn new(
        field: PrimeField,
        n: usize,
        code_label: impl Into<String>,
        gateset_label: impl Into<String>,
    ) -> Self {
        Circuit {
            field,
            n,
            code_label: code_label.into(),
            gateset_label: gateset_label.into(),
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        for w in gate.wires() {
            if w == 0 || w > self.n {
                return Err(Error::Validation(format!(
                    "gate wire {w} out of range 1..={}",
                    self.n
                )));
            }
        }
        if let GateOp::Add { control, target } = gate.op {
            if control == target {
                return Err(Error::Validation("ADD control equals target".into()));
            }
        }
        if let Some(last) = self.gates.last() {
            if gate.row < last.row {
                return Err(Error::Validation(
                    "stage row indices must be non-decreasing".into(),
                ));
            }
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn count_gates(&self) -> Metrics {
        let mut single = 0;
        let mut f_layer = 0;
        let mut two = 0;
        for g in &self.gates {
            match g.op {
                GateOp::Single { .. } => single += 1,
                GateOp::DftInverse { .. } => f_layer += 1,
                GateOp::Add { .. } | GateOp::Swap { .. } => two += 1,
            }
        }
        Metrics {
            single_qudit_count: single,
            single_qudit_count_total: single + f_layer,
            two_qudit_count: two,
            depth: self.depth(),
        }
    }

    /// ASAP unit-latency layering: a gate lands on layer
    /// 1 + max(busy layer of its wires).
    pub fn depth(&self) -> u64 {
        let mut busy = vec![0u64; self.n + 1];
        let mut depth = 0;
        for g in &self.gates {
            let layer = 1 + g.wires().into_iter().map(|w| busy[w]).max().unwrap_or(0);
            for w in g.wires() {
                busy[w] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    /// Canonical structured text; `parse` of the output reproduces the
    /// circuit bit-exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("circuit\n");
        out.push_str(&format!("d {}\n", self.field.modulus()));
        out.push_str(&format!("n {}\n", self.n));
        out.push_str(&format!("code {}\n", self.code_label));
        out.push_str(&format!("gateset {}\n", self.gateset_label));
        for g in &self.gates {
            let body = match &g.op {
                GateOp::Single { name, qudit } => format!("single {name} {qudit}"),
                GateOp::Add { control, target } => format!("add {control} {target}"),
                GateOp::Swap { a, b } => format!("swap {a} {b}"),
                GateOp::DftInverse { qudit } => format!("dftinv {qudit}"),
            };
            out.push_str(&format!("gate {} {} {body}\n", g.row, g.phase));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Circuit> {
        let mut lines = text.lines().enumerate();
        let err = |ln: usize, msg: String| Error::Parse { line: ln + 1, msg };
        let mut header_seen = false;
        let mut d = None;
        let mut n = None;
        let mut code = String::new();
        let mut gateset = String::new();
        let mut gates: Vec<Gate> = Vec::new();
        for (ln, raw) in &mut lines {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let key = it.next().unwrap();
            match key {
                "circuit" => header_seen = true,
                "d" => {
                    d = Some(
                        it.next()
                            .ok_or_else(|| err(ln, "missing d".into()))?
                            .parse::<u64>()
                            .map_err(|e| err(ln, e.to_string()))?,
                    )
                }
                "n" => {
                    n = Some(
                        it.next()
                            .ok_or_else(|| err(ln, "missing n".into()))?
                            .parse::<usize>()
                            .map_err(|e| err(ln, e.to_string()))?,
                    )
                }
                "code" => code = it.collect::<Vec<_>>().join(" "),
                "gateset" => gateset = it.collect::<Vec<_>>().join(" "),
                "gate" => {
                    let row: usize = it
                        .next()
                        .ok_or_else(|| err(ln, "missing row".into()))?
                        .parse()
                        .map_err(|e: std::num::ParseIntError| err(ln, e.to_string()))?;
                    let phase = match it.next() {
                        Some("T") => StagePhase::T,
                        Some("A") => StagePhase::A,
                        Some("F") => StagePhase::F,
                        other => return Err(err(ln, format!("bad stage phase {other:?}"))),
                    };
                    let kind = it.next().ok_or_else(|| err(ln, "missing gate kind".into()))?;
                    let mut num = |what: &str| -> Result<usize> {
                        it.next()
                            .ok_or_else(|| err(ln, format!("missing {what}")))?
                            .parse()
                            .map_err(|e: std::num::ParseIntError| err(ln, e.to_string()))
                    };
                    let op = match kind {
                        "single" => {
                            let name = it
                                .next()
                                .ok_or_else(|| err(ln, "missing gate name".into()))?
                                .to_string();
                            let qudit = it
                                .next()
                                .ok_or_else(|| err(ln, "missing qudit".into()))?
                                .parse()
                                .map_err(|e: std::num::ParseIntError| err(ln, e.to_string()))?;
                            GateOp::Single { name, qudit }
                        }
                        "add" => GateOp::Add {
                            control: num("control")?,
                            target: num("target")?,
                        },
                        "swap" => GateOp::Swap {
                            a: num("first qudit")?,
                            b: num("second qudit")?,
                        },
                        "dftinv" => GateOp::DftInverse { qudit: num("qudit")? },
                        other => return Err(err(ln, format!("unknown gate kind {other:?}"))),
                    };
                    gates.push(Gate { op, row, phase });
                }
                other => return Err(err(ln, format!("unknown key {other:?}"))),
            }
        }
        if !header_seen {
            return Err(Error::Parse {
                line: 1,
                msg: "missing `circuit` header".into(),
            });
        }
        let d = d.ok_or(Error::Parse { line: 0, msg: "missing d".into() })?;
        let n = n.ok_or(Error::Parse { line: 0, msg: "missing n".into() })?;
        let mut circuit = Circuit::new(PrimeField::new(d)?, n, code, gateset);
        for g in gates {
            circuit.push(g)?;
        }
        Ok(circuit)
    }

    /// Text diagram: one wire per line, one column per stage block, blocks
    /// separated by `|`.
    pub fn to_diagram(&self) -> String {
        // group gates into consecutive (row, phase) blocks in list order
        let mut blocks: Vec<((usize, StagePhase), Vec<&Gate>)> = Vec::new();
        for g in &self.gates {
            match blocks.last_mut() {
                Some((key, v)) if *key == (g.row, g.phase) => v.push(g),
                _ => blocks.push(((g.row, g.phase), vec![g])),
            }
        }
        let mut header = vec![String::from("      ")];
        let mut cells: Vec<Vec<String>> = vec![Vec::new(); self.n];
        for ((row, phase), gates) in &blocks {
            let title = match phase {
                StagePhase::F => "F^-1".to_string(),
                _ => format!("{phase}{row}"),
            };
            let mut col: Vec<String> = vec![String::new(); self.n];
            for g in gates {
                match &g.op {
                    GateOp::Single { name, qudit } => col[qudit - 1].push_str(name),
                    GateOp::DftInverse { qudit } => col[qudit - 1].push_str("DFT'"),
                    GateOp::Add { control, target } => {
                        col[control - 1].push('*');
                        col[target - 1].push('+');
                    }
                    GateOp::Swap { a, b } => {
                        col[a - 1].push('x');
                        col[b - 1].push('x');
                    }
                }
            }
            let width = col.iter().map(|s| s.len()).max().unwrap_or(0).max(title.len()).max(1);
            header.push(format!("{title:^width$}"));
            for (q, cell) in col.iter().enumerate() {
                let c = if cell.is_empty() { "-" } else { cell.as_str() };
                cells[q].push(format!("{c:^width$}"));
            }
        }
        let mut out = String::new();
        out.push_str(&format!(
            "# {} on {} (d={}, n={})\n",
            self.gateset_label,
            self.code_label,
            self.field.modulus(),
            self.n
        ));
        out.push_str(&header.join(" | "));
        out.push('\n');
        for q in 0..self.n {
            let mut line = vec![format!("q{:<4} ", q + 1)];
            line.extend(cells[q].iter().cloned());
            out.push_str(&line.join(" | "));
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompareReport {
    pub baseline: Metrics,
    pub proposed: Metrics,
    pub gate_reduction_percent: i64,
    pub depth_reduction_percent: i64,
}

fn reduction_percent(baseline: u64, proposed: u64) -> Result<i64> {
    if baseline == 0 {
        return Err(Error::Validation("zero baseline in comparison".into()));
    }
    let frac = (baseline as f64 - proposed as f64) / baseline as f64;
    Ok((frac * 100.0).round() as i64)
}

/// Percentage reductions of the proposed circuit relative to the baseline.
pub fn compare(baseline: &Circuit, proposed: &Circuit) -> Result<CompareReport> {
    if baseline.field != proposed.field || baseline.n != proposed.n {
        return Err(Error::Validation(
            "comparison requires the same code and dimension".into(),
        ));
    }
    let mb = baseline.count_gates();
    let mp = proposed.count_gates();
    Ok(CompareReport {
        baseline: mb,
        proposed: mp,
        gate_reduction_percent: reduction_percent(mb.single_qudit_count, mp.single_qudit_count)?,
        depth_reduction_percent: reduction_percent(mb.depth, mp.depth)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    fn single(name: &str, q: usize, row: usize) -> Gate {
        Gate {
            op: GateOp::Single { name: name.into(), qudit: q },
            row,
            phase: StagePhase::T,
        }
    }

    #[test]
    fn empty_circuit() {
        let c = Circuit::new(f3(), 3, "test", "set");
        assert_eq!(c.depth(), 0);
        let m = c.count_gates();
        assert_eq!(m.single_qudit_count, 0);
        assert_eq!(m.two_qudit_count, 0);
        let text = c.to_text();
        assert_eq!(Circuit::parse(&text).unwrap(), c);
    }

    #[test]
    fn depth_parallelizes_disjoint_wires() {
        let mut c = Circuit::new(f3(), 3, "t", "s");
        c.push(single("DFT", 1, 1)).unwrap();
        c.push(single("DFT", 2, 1)).unwrap();
        assert_eq!(c.depth(), 1);
        c.push(single("M2", 1, 1)).unwrap();
        assert_eq!(c.depth(), 2);
        assert!(c.depth() <= c.gates.len() as u64);
    }

    #[test]
    fn depth_counts_two_qudit_wires() {
        let mut c = Circuit::new(f3(), 3, "t", "s");
        c.push(Gate { op: GateOp::Add { control: 1, target: 2 }, row: 1, phase: StagePhase::A })
            .unwrap();
        c.push(Gate { op: GateOp::Add { control: 1, target: 3 }, row: 1, phase: StagePhase::A })
            .unwrap();
        // both share the control wire, so they serialize
        assert_eq!(c.depth(), 2);
    }

    #[test]
    fn depth_invariant_under_permuting_add_targets() {
        // ADDs sharing one control always chain on the control wire, so any
        // target order yields the same depth
        let perms = [[2, 3, 4], [4, 3, 2], [3, 2, 4]];
        let mut depths = Vec::new();
        for p in perms {
            let mut c = Circuit::new(f3(), 4, "t", "s");
            for t in p {
                c.push(Gate {
                    op: GateOp::Add { control: 1, target: t },
                    row: 1,
                    phase: StagePhase::A,
                })
                .unwrap();
            }
            depths.push(c.depth());
        }
        assert!(depths.iter().all(|&x| x == depths[0]));
    }

    #[test]
    fn counts_are_additive_over_concatenation() {
        let mut a = Circuit::new(f3(), 3, "t", "s");
        a.push(single("DFT", 1, 1)).unwrap();
        a.push(Gate { op: GateOp::Add { control: 1, target: 2 }, row: 1, phase: StagePhase::A })
            .unwrap();
        let mut b = Circuit::new(f3(), 3, "t", "s");
        b.push(single("M2", 3, 1)).unwrap();
        b.push(Gate { op: GateOp::DftInverse { qudit: 1 }, row: 1, phase: StagePhase::F })
            .unwrap();
        let mut both = a.clone();
        for g in &b.gates {
            both.push(g.clone()).unwrap();
        }
        let (ma, mb, m) = (a.count_gates(), b.count_gates(), both.count_gates());
        assert_eq!(m.single_qudit_count, ma.single_qudit_count + mb.single_qudit_count);
        assert_eq!(
            m.single_qudit_count_total,
            ma.single_qudit_count_total + mb.single_qudit_count_total
        );
        assert_eq!(m.two_qudit_count, ma.two_qudit_count + mb.two_qudit_count);
    }

    #[test]
    fn rejects_bad_gates() {
        let mut c = Circuit::new(f3(), 2, "t", "s");
        assert!(c.push(single("DFT", 3, 1)).is_err());
        assert!(c
            .push(Gate { op: GateOp::Add { control: 1, target: 1 }, row: 1, phase: StagePhase::A })
            .is_err());
        c.push(single("DFT", 1, 2)).unwrap();
        assert!(c.push(single("DFT", 1, 1)).is_err(), "row indices must not decrease");
    }

    #[test]
    fn reduction_percentages() {
        assert_eq!(reduction_percent(19, 16).unwrap(), 16);
        assert_eq!(reduction_percent(51, 40).unwrap(), 22);
        assert_eq!(reduction_percent(39, 33).unwrap(), 15);
        assert_eq!(reduction_percent(10, 10).unwrap(), 0);
        assert!(reduction_percent(0, 3).is_err());
    }

    #[test]
    fn parse_errors_name_the_line() {
        let bad = "circuit\nd 3\nn 2\ncode c\ngateset g\ngate 1 T single\n";
        match Circuit::parse(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 6),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
