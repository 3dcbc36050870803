//! Named generating gate sets, the preset registry, and the gate-set text
//! format.

use crate::field::PrimeField;
use crate::symplectic::{builtin_gate, builtin_symplectic, BuiltinGate, GateDef, Symplectic2};
use crate::{Error, Result};

/// An ordered collection of named gates over one field, exactly one of which
/// is flagged as the DFT entry. Entry order is significant: shortest-path
/// ties are broken by trying gates in list order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GateSet {
    pub field: PrimeField,
    pub label: String,
    gates: Vec<GateDef>,
    dft_index: usize,
}

impl GateSet {
    pub fn new(field: PrimeField, label: impl Into<String>, gates: Vec<GateDef>) -> Result<Self> {
        if gates.is_empty() {
            return Err(Error::Validation("gate set is empty".into()));
        }
        let dft_mat = builtin_symplectic(BuiltinGate::Dft, &field)?;
        let mut dft_index = None;
        for (i, g) in gates.iter().enumerate() {
            if g.symplectic == dft_mat && matches!(g.kind, crate::symplectic::GateKind::Builtin(BuiltinGate::Dft)) {
                if dft_index.is_some() {
                    return Err(Error::Validation("gate set has two DFT entries".into()));
                }
                dft_index = Some(i);
            }
        }
        let dft_index = dft_index
            .ok_or_else(|| Error::Validation("gate set lacks a DFT entry".into()))?;
        let mut names: Vec<&str> = gates.iter().map(|g| g.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != gates.len() {
            return Err(Error::Validation("duplicate gate names in set".into()));
        }
        Ok(GateSet {
            field,
            label: label.into(),
            gates,
            dft_index,
        })
    }

    pub fn gates(&self) -> &[GateDef] {
        &self.gates
    }

    pub fn dft(&self) -> &GateDef {
        &self.gates[self.dft_index]
    }

    pub fn matrices(&self) -> Vec<Symplectic2> {
        self.gates.iter().map(|g| g.symplectic).collect()
    }

    pub fn by_name(&self, name: &str) -> Option<&GateDef> {
        self.gates.iter().find(|g| g.name == name)
    }

    /// Canonical text form; `parse` of the output reproduces the set.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("d {}\n", self.field.modulus()));
        out.push_str(&format!("label {}\n", self.label));
        for (i, g) in self.gates.iter().enumerate() {
            let tag = if i == self.dft_index { "dft" } else { "gate" };
            let e = g.symplectic.entries();
            out.push_str(&format!("{tag} {} {} {} {} {}\n", g.name, e[0], e[1], e[2], e[3]));
        }
        out
    }

    pub fn parse(text: &str) -> Result<GateSet> {
        let mut d = None;
        let mut label = String::new();
        let mut gates = Vec::new();
        let mut field = None;
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let key = it.next().unwrap();
            let err = |msg: String| Error::Parse {
                line: ln + 1,
                msg,
            };
            match key {
                "d" => {
                    let v: u64 = it
                        .next()
                        .ok_or_else(|| err("missing modulus".into()))?
                        .parse()
                        .map_err(|e| err(format!("bad modulus: {e}")))?;
                    field = Some(PrimeField::new(v).map_err(|e| err(e.to_string()))?);
                    d = Some(v);
                }
                "label" => {
                    label = it.collect::<Vec<_>>().join(" ");
                }
                "gate" | "dft" => {
                    let f = field.ok_or_else(|| err("gate before d header".into()))?;
                    let name = it.next().ok_or_else(|| err("missing gate name".into()))?;
                    let mut e = [0u64; 4];
                    for slot in &mut e {
                        *slot = it
                            .next()
                            .ok_or_else(|| err("gate needs 4 matrix entries".into()))?
                            .parse()
                            .map_err(|e| err(format!("bad entry: {e}")))?;
                    }
                    if it.next().is_some() {
                        return Err(err("trailing tokens after matrix entries".into()));
                    }
                    let m = Symplectic2::new([[e[0], e[1]], [e[2], e[3]]], &f)
                        .map_err(|e| err(e.to_string()))?;
                    let mut def = match known_kind(name, &f, &m) {
                        Some(def) => GateDef { name: name.to_string(), ..def },
                        None => GateDef::custom(name, m),
                    };
                    if key == "dft" {
                        let expect = builtin_symplectic(BuiltinGate::Dft, &f).unwrap();
                        if m != expect {
                            return Err(err(format!(
                                "dft entry must be [[0,{}],[1,0]]",
                                f.modulus() - 1
                            )));
                        }
                        def.kind = crate::symplectic::GateKind::Builtin(BuiltinGate::Dft);
                    }
                    gates.push(def);
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        let d = d.ok_or(Error::Parse {
            line: 0,
            msg: "missing d header".into(),
        })?;
        let field = PrimeField::new(d)?;
        GateSet::new(field, label, gates)
    }
}

/// Recognizes names with a formula-backed construction so dense verification
/// can use the explicit operator rather than a synthesized one.
fn known_kind(name: &str, field: &PrimeField, m: &Symplectic2) -> Option<GateDef> {
    let def = match name {
        "DFT" => builtin_gate("DFT", field, None).ok()?,
        "L" => builtin_gate("L", field, None).ok()?,
        "R" => builtin_gate("R", field, None).ok()?,
        _ => {
            let (fam, idx) = name.split_at(1);
            let g: u64 = idx.parse().ok()?;
            match fam {
                "M" => builtin_gate("M", field, Some(g)).ok()?,
                "P" => builtin_gate("P", field, Some(g)).ok()?,
                _ => return None,
            }
        }
    };
    (def.symplectic == *m).then_some(def)
}

pub const PRESET_NAMES: [&str; 10] = [
    "d3-sec3-3",
    "d3-sec3-4",
    "d3-proposed-3",
    "d3-proposed-4",
    "d5-sec3-3",
    "d5-sec3-4",
    "d5-sec3-5",
    "d5-proposed-3",
    "d5-proposed-4",
    "d5-proposed-5",
];

/// Builds a preset gate set by registry name.
pub fn preset(name: &str) -> Result<GateSet> {
    let unknown = || Error::Validation(format!("unknown preset {name:?}; known: {PRESET_NAMES:?}"));
    let (d, rest) = if let Some(r) = name.strip_prefix("d3-") {
        (3u64, r)
    } else if let Some(r) = name.strip_prefix("d5-") {
        (5u64, r)
    } else {
        return Err(unknown());
    };
    let field = PrimeField::new(d)?;
    let b = |n: &str, g: Option<u64>| builtin_gate(n, &field, g).unwrap();
    let c = |n: &str, e: [[u64; 2]; 2]| -> GateDef {
        GateDef::custom(n, Symplectic2::new(e, &field).unwrap())
    };
    let gates = match (d, rest) {
        (3, "sec3-3") => vec![b("DFT", None), b("P", Some(1)), b("P", Some(2))],
        (3, "sec3-4") => vec![b("DFT", None), b("M", Some(2)), b("P", Some(1)), b("P", Some(2))],
        (3, "proposed-3") => vec![b("DFT", None), c("A1", [[1, 2], [2, 2]]), c("A2", [[2, 1], [0, 2]])],
        (3, "proposed-4") => vec![b("DFT", None), b("L", None), b("M", Some(2)), b("R", None)],
        (5, "sec3-3") => vec![b("DFT", None), b("P", Some(1)), b("P", Some(2))],
        (5, "sec3-4") => vec![b("DFT", None), b("M", Some(2)), b("P", Some(1)), b("P", Some(2))],
        (5, "sec3-5") => vec![
            b("DFT", None),
            b("M", Some(2)),
            b("M", Some(3)),
            b("P", Some(1)),
            b("P", Some(2)),
        ],
        (5, "proposed-3") => vec![b("DFT", None), c("C1", [[3, 0], [4, 2]]), c("C2", [[1, 4], [3, 3]])],
        (5, "proposed-4") => vec![
            b("DFT", None),
            c("P", [[2, 3], [2, 1]]),
            c("Q", [[2, 0], [0, 3]]),
            c("S", [[4, 4], [0, 4]]),
        ],
        (5, "proposed-5") => vec![
            b("DFT", None),
            c("E1", [[0, 3], [3, 1]]),
            c("E2", [[2, 4], [2, 2]]),
            c("E3", [[4, 0], [1, 4]]),
            c("E4", [[0, 4], [1, 4]]),
        ],
        _ => return Err(unknown()),
    };
    GateSet::new(field, name, gates)
}

/// Loads a gate set from a preset name or, failing that, a file path.
pub fn preset_or_file(spec: &str) -> Result<GateSet> {
    if PRESET_NAMES.contains(&spec) {
        return preset(spec);
    }
    let text = std::fs::read_to_string(spec)
        .map_err(|e| Error::Validation(format!("{spec}: not a preset name and not readable: {e}")))?;
    GateSet::parse(&text)
}
