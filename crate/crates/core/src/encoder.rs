//! Encoder synthesis: reduce a stabilizer check matrix to canonical form by
//! per-qudit gate words (T stages) and ADD/SWAP column operations (A stages),
//! then append an inverse-DFT layer on the pivot qudits.

use crate::circuit::{Circuit, Gate, GateOp, StagePhase};
use crate::field::{Felt, PrimeField};
use crate::gateset::GateSet;
use crate::search::{paths_for_gateset, word_names, PathTable};
use crate::symplectic::{compose, row_update, PhaseVector, RowAction, Symplectic2};
use crate::{Error, Result};

pub type Matrix = Vec<Vec<PhaseVector>>;

/// An (n-k) x 2n check matrix over F_d, stored as rows of qudit pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckMatrix {
    pub field: PrimeField,
    pub n: usize,
    pub k: usize,
    pub label: String,
    pub provenance: String,
    pub rows: Matrix,
}

impl CheckMatrix {
    pub fn new(
        field: PrimeField,
        n: usize,
        k: usize,
        label: impl Into<String>,
        provenance: impl Into<String>,
        rows: Matrix,
    ) -> Result<Self> {
        if n == 0 || k >= n {
            return Err(Error::Validation(format!("bad code parameters n={n}, k={k}")));
        }
        if rows.len() != n - k {
            return Err(Error::Validation(format!(
                "expected {} rows, got {}",
                n - k,
                rows.len()
            )));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Validation(format!(
                    "row {} has {} qudit pairs, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
            for p in row {
                if p.a.0 >= field.modulus() || p.b.0 >= field.modulus() {
                    return Err(Error::Validation(format!(
                        "row {} has entry out of range for d={}",
                        i + 1,
                        field.modulus()
                    )));
                }
            }
        }
        let cm = CheckMatrix {
            field,
            n,
            k,
            label: label.into(),
            provenance: provenance.into(),
            rows,
        };
        cm.validate()?;
        Ok(cm)
    }

    /// Symplectic inner product of two rows: sum of a_i*b'_i - a'_i*b_i.
    pub fn symplectic_product(&self, r1: &[PhaseVector], r2: &[PhaseVector]) -> Felt {
        let f = &self.field;
        let mut acc = Felt(0);
        for (p, q) in r1.iter().zip(r2) {
            acc = f.add(acc, f.sub(f.mul(p.a, q.b), f.mul(q.a, p.b)));
        }
        acc
    }

    /// Checks pairwise commutation and row independence; diagnostics name
    /// the offending rows.
    pub fn validate(&self) -> Result<()> {
        for i in 0..self.rows.len() {
            for j in (i + 1)..self.rows.len() {
                let sip = self.symplectic_product(&self.rows[i], &self.rows[j]);
                if sip.0 != 0 {
                    return Err(Error::Validation(format!(
                        "rows {} and {} do not commute: symplectic product {}",
                        i + 1,
                        j + 1,
                        sip
                    )));
                }
            }
        }
        if let Some(dep) = self.dependent_row() {
            return Err(Error::Validation(format!(
                "row {} is linearly dependent on earlier rows",
                dep + 1
            )));
        }
        Ok(())
    }

    /// Index of the first row dependent on the ones before it, if any.
    fn dependent_row(&self) -> Option<usize> {
        let d = self.field.modulus();
        let f = &self.field;
        let mut basis: Vec<Vec<Felt>> = Vec::new();
        for (ri, row) in self.rows.iter().enumerate() {
            let mut v: Vec<Felt> = row
                .iter()
                .map(|p| p.a)
                .chain(row.iter().map(|p| p.b))
                .collect();
            // reduce against the echelon basis collected so far
            for b in &basis {
                let lead = b.iter().position(|x| x.0 != 0).unwrap();
                if v[lead].0 != 0 {
                    let factor = f.mul(v[lead], f.inverse(b[lead]).unwrap());
                    for (x, y) in v.iter_mut().zip(b) {
                        *x = f.sub(*x, f.mul(factor, *y));
                    }
                }
            }
            if v.iter().all(|x| x.0 == 0) {
                return Some(ri);
            }
            basis.push(v);
            basis.sort_by_key(|b| b.iter().position(|x| x.0 != 0).unwrap_or(2 * d as usize));
        }
        None
    }

    /// Canonical text form: headers then one line of 2n integers per row,
    /// X block first.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("d {}\n", self.field.modulus()));
        out.push_str(&format!("n {}\n", self.n));
        out.push_str(&format!("k {}\n", self.k));
        out.push_str(&format!("label {}\n", self.label));
        out.push_str(&format!("provenance {}\n", self.provenance));
        for row in &self.rows {
            let xs: Vec<String> = row.iter().map(|p| p.a.to_string()).collect();
            let zs: Vec<String> = row.iter().map(|p| p.b.to_string()).collect();
            out.push_str(&format!("{} {}\n", xs.join(" "), zs.join(" ")));
        }
        out
    }

    pub fn parse(text: &str) -> Result<CheckMatrix> {
        let err = |ln: usize, msg: String| Error::Parse { line: ln + 1, msg };
        let mut d = None;
        let mut n = None;
        let mut k = None;
        let mut label = String::new();
        let mut provenance = String::new();
        let mut rows: Matrix = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let first = it.next().unwrap();
            match first {
                "d" => d = Some(parse_num::<u64>(it.next(), ln)?),
                "n" => n = Some(parse_num::<usize>(it.next(), ln)?),
                "k" => k = Some(parse_num::<usize>(it.next(), ln)?),
                "label" => label = it.collect::<Vec<_>>().join(" "),
                "provenance" => provenance = it.collect::<Vec<_>>().join(" "),
                _ => {
                    let n = n.ok_or_else(|| err(ln, "matrix row before n header".into()))?;
                    let mut vals: Vec<u64> = Vec::with_capacity(2 * n);
                    vals.push(first.parse().map_err(|e| err(ln, format!("bad entry: {e}")))?);
                    for tok in it {
                        vals.push(tok.parse().map_err(|e| err(ln, format!("bad entry: {e}")))?);
                    }
                    if vals.len() != 2 * n {
                        return Err(err(
                            ln,
                            format!("row has {} entries, expected {}", vals.len(), 2 * n),
                        ));
                    }
                    let row: Vec<PhaseVector> = (0..n)
                        .map(|q| PhaseVector::new(vals[q], vals[n + q]))
                        .collect();
                    rows.push(row);
                }
            }
        }
        let d = d.ok_or(Error::Parse { line: 0, msg: "missing d header".into() })?;
        let n = n.ok_or(Error::Parse { line: 0, msg: "missing n header".into() })?;
        let k = k.ok_or(Error::Parse { line: 0, msg: "missing k header".into() })?;
        CheckMatrix::new(PrimeField::new(d)?, n, k, label, provenance, rows)
    }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, ln: usize) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    tok.ok_or(Error::Parse {
        line: ln + 1,
        msg: "missing value".into(),
    })?
    .parse()
    .map_err(|e: T::Err| Error::Parse {
        line: ln + 1,
        msg: e.to_string(),
    })
}

/// One reduction stage: the per-qudit gate words, the optional pivot swap,
/// and the ordered ADD list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageRecord {
    pub row: usize,
    /// (qudit, word of gate names in application order), ascending qudit.
    pub t: Vec<(usize, Vec<String>)>,
    pub swap: Option<(usize, usize)>,
    /// (control, target), targets ascending.
    pub adds: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageLog {
    pub stages: Vec<StageRecord>,
    /// Pivot qudits receiving the final inverse DFT.
    pub f_layer: Vec<usize>,
}

impl StageLog {
    /// Rendering that mirrors the per-stage operator tables: T rows as
    /// tensor words, A rows as gate lists.
    pub fn render(&self, n: usize) -> String {
        let mut out = String::new();
        for st in &self.stages {
            let mut words: Vec<String> = vec!["id".into(); n];
            for (q, w) in &st.t {
                words[q - 1] = w.concat();
            }
            out.push_str(&format!("T{} : {}\n", st.row, words.join(" . ")));
            let mut ops: Vec<String> = Vec::new();
            if let Some((i, j)) = st.swap {
                ops.push(format!("SWAP({i},{j})"));
            }
            for (c, t) in &st.adds {
                ops.push(format!("ADD({c},{t})"));
            }
            out.push_str(&format!(
                "A{} : {}\n",
                st.row,
                if ops.is_empty() { "id".into() } else { ops.join(" ") }
            ));
        }
        let f: Vec<String> = self.f_layer.iter().map(|q| format!("DFT'({q})")).collect();
        out.push_str(&format!("F  : {}\n", f.join(" ")));
        out
    }
}

/// Outcome of a synthesis run: the emitted circuit, the stage log, the
/// tracked matrix after the last A stage, and per-stage snapshots (after the
/// T stage, after the A stage) for regression against printed reductions.
#[derive(Debug, Clone)]
pub struct Synthesis {
    pub circuit: Circuit,
    pub log: StageLog,
    pub final_rows: Matrix,
    pub snapshots: Vec<(Matrix, Matrix)>,
}

fn word_matrix(word: &[usize], mats: &[Symplectic2], field: &PrimeField) -> Symplectic2 {
    let ms: Vec<Symplectic2> = word.iter().map(|&i| mats[i]).collect();
    compose(&ms, field)
}

/// Reduces row `i` (0-based) in place: T stage, pivot swap if needed, then
/// ADDs. All updates touch rows >= i only.
pub fn reduce_row(
    rows: &mut Matrix,
    i: usize,
    gateset: &GateSet,
    paths: &PathTable,
) -> Result<StageRecord> {
    let field = &gateset.field;
    let n = rows[i].len();
    let mats: Vec<Symplectic2> = gateset.matrices();
    if rows[i].iter().all(|p| p.is_zero()) {
        return Err(Error::Validation(format!(
            "row {} is a dependent stabilizer: identically zero at reduction time",
            i + 1
        )));
    }

    let mut t_stage: Vec<(usize, Vec<String>)> = Vec::new();
    for q in 0..n {
        let pair = rows[i][q];
        if pair.is_zero() || pair == PhaseVector::new(1, 0) {
            continue;
        }
        let word = paths
            .word(&pair)
            .ok_or_else(|| Error::Validation(format!("no path for vector {pair}")))?;
        let m = word_matrix(word, &mats, field);
        for row in rows.iter_mut().skip(i) {
            row_update(row, RowAction::Single { qudit: q + 1, m }, field)?;
        }
        let names: Vec<String> = word.iter().map(|&gi| gateset.gates()[gi].name.clone()).collect();
        t_stage.push((q + 1, names));
    }

    let mut swap = None;
    if rows[i][i].is_zero() {
        let target = PhaseVector::new(1, 0);
        let q = (i + 1..n)
            .find(|&q| rows[i][q] == target)
            .ok_or_else(|| {
                Error::Validation(format!(
                    "row {}: no pivot available at any qudit >= {}",
                    i + 1,
                    i + 1
                ))
            })?;
        for row in rows.iter_mut().skip(i) {
            row_update(row, RowAction::Swap { i: i + 1, j: q + 1 }, field)?;
        }
        swap = Some((i + 1, q + 1));
    }

    let mut adds = Vec::new();
    for q in 0..n {
        if q != i && rows[i][q] == PhaseVector::new(1, 0) {
            adds.push((i + 1, q + 1));
        }
    }
    for &(c, t) in &adds {
        for row in rows.iter_mut().skip(i) {
            row_update(row, RowAction::Add { control: c, target: t }, field)?;
        }
    }

    debug_assert!(rows[i]
        .iter()
        .enumerate()
        .all(|(q, p)| *p == if q == i { PhaseVector::new(1, 0) } else { PhaseVector::new(0, 0) }));

    Ok(StageRecord {
        row: i + 1,
        t: t_stage,
        swap,
        adds,
    })
}

/// Runs the full reduction and emits the encoder circuit
/// T1 A1 ... T_{n-k} A_{n-k} F^-1 in stage order.
pub fn synthesize_encoder(check: &CheckMatrix, gateset: &GateSet) -> Result<Synthesis> {
    if gateset.field != check.field {
        return Err(Error::Validation(format!(
            "gate set is over d={} but code is over d={}",
            gateset.field.modulus(),
            check.field.modulus()
        )));
    }
    check.validate()?;
    if !crate::search::is_generating_set(&gateset.matrices(), &gateset.field) {
        return Err(Error::Validation(format!(
            "gate set {:?} does not generate SL(2,F_{})",
            gateset.label,
            gateset.field.modulus()
        )));
    }
    let paths = paths_for_gateset(gateset);
    let n = check.n;
    let nk = n - check.k;
    let mut rows = check.rows.clone();
    let mut log = StageLog {
        stages: Vec::new(),
        f_layer: (1..=nk).collect(),
    };
    let mut snapshots = Vec::new();
    let mut circuit = Circuit::new(check.field, n, check.label.clone(), gateset.label.clone());

    for i in 0..nk {
        // snapshot boundary: reduce_row mutates, so replay its two halves for
        // the after-T snapshot by running it on a scratch copy first
        let mut scratch = rows.clone();
        let record = reduce_row(&mut scratch, i, gateset, &paths)?;
        // after-T snapshot: apply just the T stage (and no swap/adds)
        let mats = gateset.matrices();
        for (q, word) in &record.t {
            let idxs: Vec<usize> = word
                .iter()
                .map(|nm| {
                    gateset
                        .gates()
                        .iter()
                        .position(|g| &g.name == nm)
                        .expect("word names come from the gate set")
                })
                .collect();
            let m = word_matrix(&idxs, &mats, &gateset.field);
            for row in rows.iter_mut().skip(i) {
                row_update(row, RowAction::Single { qudit: *q, m }, &gateset.field)?;
            }
        }
        let after_t = rows.clone();
        if let Some((a, b)) = record.swap {
            for row in rows.iter_mut().skip(i) {
                row_update(row, RowAction::Swap { i: a, j: b }, &gateset.field)?;
            }
        }
        for &(c, t) in &record.adds {
            for row in rows.iter_mut().skip(i) {
                row_update(row, RowAction::Add { control: c, target: t }, &gateset.field)?;
            }
        }
        debug_assert_eq!(rows, scratch);
        snapshots.push((after_t, rows.clone()));

        for (q, word) in &record.t {
            for name in word {
                circuit.push(Gate {
                    op: GateOp::Single { name: name.clone(), qudit: *q },
                    row: i + 1,
                    phase: StagePhase::T,
                })?;
            }
        }
        if let Some((a, b)) = record.swap {
            circuit.push(Gate {
                op: GateOp::Swap { a, b },
                row: i + 1,
                phase: StagePhase::A,
            })?;
        }
        for &(c, t) in &record.adds {
            circuit.push(Gate {
                op: GateOp::Add { control: c, target: t },
                row: i + 1,
                phase: StagePhase::A,
            })?;
        }
        log.stages.push(record);
    }

    for &q in &log.f_layer {
        circuit.push(Gate {
            op: GateOp::DftInverse { qudit: q },
            row: nk,
            phase: StagePhase::F,
        })?;
    }

    Ok(Synthesis {
        circuit,
        log,
        final_rows: rows,
        snapshots,
    })
}

/// Replays the complete stage sequence against every row of the original
/// matrix (not just rows below each stage) and returns the resulting rows.
/// The stabilizer group, not the generator list, reaches canonical form; the
/// row space of the result must equal the span of the pivot X unit rows.
pub fn replay_full_conjugation(check: &CheckMatrix, log: &StageLog, gateset: &GateSet) -> Result<Matrix> {
    let field = &gateset.field;
    let mats = gateset.matrices();
    let mut rows = check.rows.clone();
    for st in &log.stages {
        for (q, word) in &st.t {
            let idxs: Vec<usize> = word
                .iter()
                .map(|nm| gateset.gates().iter().position(|g| &g.name == nm).unwrap())
                .collect();
            let m = word_matrix(&idxs, &mats, field);
            for row in rows.iter_mut() {
                row_update(row, RowAction::Single { qudit: *q, m }, field)?;
            }
        }
        if let Some((a, b)) = st.swap {
            for row in rows.iter_mut() {
                row_update(row, RowAction::Swap { i: a, j: b }, field)?;
            }
        }
        for &(c, t) in &st.adds {
            for row in rows.iter_mut() {
                row_update(row, RowAction::Add { control: c, target: t }, field)?;
            }
        }
    }
    Ok(rows)
}

/// Row-reduces a set of phase-space rows to reduced echelon form over F_d,
/// for row-space comparisons.
pub fn row_space_rref(rows: &Matrix, field: &PrimeField) -> Vec<Vec<Felt>> {
    let mut mat: Vec<Vec<Felt>> = rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|p| p.a)
                .chain(row.iter().map(|p| p.b))
                .collect()
        })
        .collect();
    let cols = mat.first().map(|r| r.len()).unwrap_or(0);
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(r) = (pivot_row..mat.len()).find(|&r| mat[r][col].0 != 0) else {
            continue;
        };
        mat.swap(pivot_row, r);
        let inv = field.inverse(mat[pivot_row][col]).unwrap();
        for x in mat[pivot_row].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for r in 0..mat.len() {
            if r != pivot_row && mat[r][col].0 != 0 {
                let factor = mat[r][col];
                let pivot = mat[pivot_row].clone();
                for (x, y) in mat[r].iter_mut().zip(&pivot) {
                    *x = field.sub(*x, field.mul(factor, *y));
                }
            }
        }
        pivot_row += 1;
        if pivot_row == mat.len() {
            break;
        }
    }
    mat.truncate(pivot_row);
    mat
}
