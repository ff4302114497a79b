//! File formats: perfect-form checkpoints and cell databases as JSON Lines,
//! and the per-run summary document as a single JSON object. Every number
//! is an exact decimal string — integers as written, rationals always as
//! `"p/q"` — so round trips are bit-exact and no floating point ever
//! appears in an artifact.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use perfect_forms::cell_complex::VoronoiComplex;
use perfect_forms::field::{Disc, Int, QuadInt, Rat};
use perfect_forms::hermitian::{HermForm, OVec};
use perfect_forms::linalg::SparseIntMat;
use perfect_forms::voronoi::Census;

pub fn rat_to_string(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rat_from_string(s: &str) -> Result<Rat> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n = Int::from_str(num.trim()).map_err(|e| anyhow::anyhow!("bad numerator: {e}"))?;
    let d = Int::from_str(den.trim()).map_err(|e| anyhow::anyhow!("bad denominator: {e}"))?;
    if d == Int::from(0) {
        bail!("zero denominator");
    }
    Ok(Rat::new(n, d))
}

pub fn int_to_string(v: &Int) -> String {
    v.to_string()
}

pub fn int_from_string(s: &str) -> Result<Int> {
    Int::from_str(s.trim()).map_err(|e| anyhow::anyhow!("bad integer: {e}"))
}

fn vector_to_strings(v: &OVec) -> Vec<[String; 2]> {
    v.0.iter()
        .map(|c| [c.a.to_string(), c.b.to_string()])
        .collect()
}

fn vector_from_strings(coords: &[[String; 2]]) -> Result<OVec> {
    Ok(OVec(
        coords
            .iter()
            .map(|[a, b]| Ok(QuadInt::new(int_from_string(a)?, int_from_string(b)?)))
            .collect::<Result<_>>()?,
    ))
}

/// One line of a perfect-forms checkpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CheckpointRecord {
    #[serde(rename = "perfect-forms")]
    Header {
        version: u32,
        disc: i64,
        rank: usize,
        /// classes fully expanded by the walk so far
        processed: usize,
        class_count: usize,
    },
    #[serde(rename = "class")]
    Class {
        /// form coordinates, exact rationals
        form: Vec<String>,
        min_vector_classes: usize,
        min_vector_total: usize,
        stab_order: String,
    },
}

pub struct CheckpointState {
    pub disc: i64,
    pub rank: usize,
    pub processed: usize,
    pub forms: Vec<HermForm>,
}

pub fn save_checkpoint(
    path: &Path,
    k: Disc,
    rank: usize,
    classes: &[perfect_forms::voronoi::PerfectForm],
    processed: usize,
) -> Result<()> {
    let mut lines = Vec::with_capacity(classes.len() + 1);
    lines.push(serde_json::to_string(&CheckpointRecord::Header {
        version: 1,
        disc: k.d(),
        rank,
        processed,
        class_count: classes.len(),
    })?);
    for c in classes {
        lines.push(serde_json::to_string(&CheckpointRecord::Class {
            form: c.form.coords().iter().map(rat_to_string).collect(),
            min_vector_classes: c.minvec.vectors.len(),
            min_vector_total: c.minvec.total_count,
            stab_order: int_to_string(&c.stabilizer.order),
        })?);
    }
    write_atomically(path, &lines.join("\n"))
}

pub fn load_checkpoint(path: &Path) -> Result<CheckpointState> {
    let file = fs::File::open(path).with_context(|| format!("open {}", path.display()))?;
    let mut lines = BufReader::new(file).lines();
    let header: CheckpointRecord = serde_json::from_str(
        &lines
            .next()
            .context("empty checkpoint")?
            .context("read checkpoint")?,
    )?;
    let CheckpointRecord::Header {
        version,
        disc,
        rank,
        processed,
        class_count,
    } = header
    else {
        bail!("checkpoint does not start with a header line");
    };
    if version != 1 {
        bail!("unsupported checkpoint version {version}");
    }
    let k = Disc::new(disc).map_err(|e| anyhow::anyhow!("{e}"))?;
    let mut forms = Vec::new();
    for line in lines {
        let rec: CheckpointRecord = serde_json::from_str(&line?)?;
        let CheckpointRecord::Class { form, .. } = rec else {
            bail!("unexpected extra header line");
        };
        let coords: Vec<Rat> = form
            .iter()
            .map(|s| rat_from_string(s))
            .collect::<Result<_>>()?;
        forms.push(HermForm::from_coords(k, rank, &coords).map_err(|e| anyhow::anyhow!("{e}"))?);
    }
    if forms.len() != class_count {
        bail!("checkpoint class count mismatch");
    }
    Ok(CheckpointState {
        disc,
        rank,
        processed,
        forms,
    })
}

/// One line of a cell database.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum CellsRecord {
    #[serde(rename = "cell-complex")]
    Header { disc: i64, rank: usize },
    #[serde(rename = "cell")]
    Cell {
        dim: usize,
        vectors: Vec<Vec<[String; 2]>>,
        stab_order: String,
        stab_factorization: Vec<(u64, u32)>,
        stab_generators: Vec<Vec<[String; 2]>>,
        orientable: bool,
        /// orientation basis as indices into `vectors`
        basis: Vec<usize>,
    },
    #[serde(rename = "differential")]
    Differential {
        dim: usize,
        rows: usize,
        cols: usize,
        entries: Vec<(usize, usize, String)>,
    },
}

pub fn save_cells(path: &Path, complex: &VoronoiComplex) -> Result<()> {
    let mut lines = Vec::new();
    lines.push(serde_json::to_string(&CellsRecord::Header {
        disc: complex.k.d(),
        rank: complex.n,
    })?);
    for cells in &complex.cells {
        for c in cells {
            lines.push(serde_json::to_string(&CellsRecord::Cell {
                dim: c.dim,
                vectors: c.vectors.iter().map(vector_to_strings).collect(),
                stab_order: int_to_string(&c.stabilizer.order),
                stab_factorization: c.stabilizer.factorization.clone(),
                stab_generators: c
                    .stabilizer
                    .generators
                    .iter()
                    .map(|g| {
                        g.entries
                            .iter()
                            .map(|e| [e.a.to_string(), e.b.to_string()])
                            .collect()
                    })
                    .collect(),
                orientable: c.orientable,
                basis: c.basis.clone(),
            })?);
        }
    }
    for (dim, d) in complex.differentials.iter().enumerate() {
        if d.rows == 0 && d.cols == 0 {
            continue;
        }
        lines.push(serde_json::to_string(&CellsRecord::Differential {
            dim,
            rows: d.rows,
            cols: d.cols,
            entries: d
                .entries
                .iter()
                .map(|(&(i, j), v)| (i, j, int_to_string(v)))
                .collect(),
        })?);
    }
    write_atomically(path, &lines.join("\n"))
}

/// The verification-relevant content of a cell database.
#[derive(Clone, Debug)]
pub struct LoadedComplex {
    pub disc: i64,
    pub rank: usize,
    /// stabilizer orders of all cells, per dimension
    pub stab_orders: Vec<Vec<Int>>,
    /// stabilizer orders of orientable cells, per dimension
    pub orientable_orders: Vec<Vec<Int>>,
    pub differentials: Vec<SparseIntMat>,
    /// loaded vector sets per dimension (for resumable cell work)
    pub vectors: Vec<Vec<Vec<OVec>>>,
}

impl LoadedComplex {
    pub fn top_dim(&self) -> usize {
        self.rank * self.rank - 1
    }
}

pub fn load_cells(path: &Path) -> Result<LoadedComplex> {
    let file = fs::File::open(path).with_context(|| format!("open {}", path.display()))?;
    let mut lines = BufReader::new(file).lines();
    let header: CellsRecord = serde_json::from_str(
        &lines.next().context("empty cell database")?.context("read")?,
    )?;
    let CellsRecord::Header { disc, rank } = header else {
        bail!("cell database does not start with a header line");
    };
    let top = rank * rank - 1;
    let mut stab_orders = vec![Vec::new(); top + 1];
    let mut orientable_orders = vec![Vec::new(); top + 1];
    let mut vectors = vec![Vec::new(); top + 1];
    let mut differentials: Vec<SparseIntMat> = (0..=top)
        .map(|_| SparseIntMat::zero(0, 0))
        .collect();
    for line in lines {
        let rec: CellsRecord = serde_json::from_str(&line?)?;
        match rec {
            CellsRecord::Header { .. } => bail!("duplicate header"),
            CellsRecord::Cell {
                dim,
                vectors: vs,
                stab_order,
                orientable,
                ..
            } => {
                if dim > top {
                    bail!("cell dimension out of range");
                }
                let order = int_from_string(&stab_order)?;
                stab_orders[dim].push(order.clone());
                if orientable {
                    orientable_orders[dim].push(order);
                }
                vectors[dim].push(
                    vs.iter()
                        .map(|v| vector_from_strings(v))
                        .collect::<Result<_>>()?,
                );
            }
            CellsRecord::Differential {
                dim,
                rows,
                cols,
                entries,
            } => {
                if dim > top {
                    bail!("differential dimension out of range");
                }
                let mut m = SparseIntMat::zero(rows, cols);
                for (i, j, v) in entries {
                    m.add_entry(i, j, int_from_string(&v)?);
                }
                differentials[dim] = m;
            }
        }
    }
    Ok(LoadedComplex {
        disc,
        rank,
        stab_orders,
        orientable_orders,
        differentials,
        vectors,
    })
}

fn write_atomically(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(content.as_bytes())?;
        f.write_all(b"\n")?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

// ---- per-run summary document ----

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocConfig {
    pub disc: i64,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusClassDoc {
    pub form: Vec<String>,
    pub min_vector_classes: usize,
    pub min_vector_total: usize,
    pub stab_order: String,
    pub stab_order_factored: String,
    /// per facet: index of the neighboring class, or none for a boundary facet
    pub neighbors: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusDoc {
    pub class_count: usize,
    pub classes: Vec<CensusClassDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRowDoc {
    pub dim: usize,
    pub orbit_count: usize,
    /// stabilizer orders in the `A (k)` shorthand, factored
    pub stab_orders: Vec<String>,
    pub orientable_count: usize,
    pub nnz: usize,
    pub rank: usize,
    /// elementary divisors in the `d (k)` shorthand
    pub elementary_divisors: Vec<String>,
    pub homology: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationDoc {
    pub chain_identity: String,
    /// whether the zero-total mass criterion applies (rank ≥ 2)
    pub mass_applicable: bool,
    pub mass_total: String,
    /// signed per-dimension terms `(−1)^k Σ 1/|Stab|`
    pub mass_terms: Vec<(usize, String)>,
    pub xi_is_cycle: bool,
    pub xi_kernel: Vec<String>,
    pub xi_weights: Vec<String>,
    pub xi_stab_orders: Vec<String>,
    pub all_pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunDocument {
    pub config: DocConfig,
    pub serre_primes: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub census: Option<CensusDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<TableRowDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationDoc>,
}

impl RunDocument {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<RunDocument> {
        Ok(serde_json::from_str(s)?)
    }
}

pub fn census_doc(census: &Census) -> CensusDoc {
    CensusDoc {
        class_count: census.classes.len(),
        classes: census
            .classes
            .iter()
            .map(|c| CensusClassDoc {
                form: c.form.coords().iter().map(rat_to_string).collect(),
                min_vector_classes: c.minvec.vectors.len(),
                min_vector_total: c.minvec.total_count,
                stab_order: int_to_string(&c.stabilizer.order),
                stab_order_factored: crate::tables::factored(&c.stabilizer.factorization),
                neighbors: c.neighbors.iter().map(|&(_, t)| t).collect(),
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use perfect_forms::field::rat_frac;

    #[test]
    fn rational_strings_round_trip() {
        for r in [
            rat_frac(0, 1),
            rat_frac(-17, 92160),
            rat_frac(28375, 2304),
            rat_frac(5, -15),
        ] {
            assert_eq!(rat_from_string(&rat_to_string(&r)).unwrap(), r);
        }
        assert_eq!(rat_from_string("3").unwrap(), rat_frac(3, 1));
        assert!(rat_from_string("1/0").is_err());
    }

    #[test]
    fn run_document_round_trips() {
        let doc = RunDocument {
            config: DocConfig { disc: -4, rank: 3 },
            serre_primes: vec![2, 3],
            census: Some(CensusDoc {
                class_count: 1,
                classes: vec![CensusClassDoc {
                    form: vec!["1/1".into(), "1/2".into()],
                    min_vector_classes: 15,
                    min_vector_total: 60,
                    stab_order: "384".into(),
                    stab_order_factored: "2^7*3".into(),
                    neighbors: vec![Some(0), None],
                }],
            }),
            table: Some(vec![TableRowDoc {
                dim: 8,
                orbit_count: 1,
                stab_orders: vec!["2^7*3 (1)".into()],
                orientable_count: 1,
                nnz: 0,
                rank: 0,
                elementary_divisors: vec![],
                homology: "Z".into(),
            }]),
            verification: Some(VerificationDoc {
                chain_identity: "pass".into(),
                mass_applicable: true,
                mass_total: "0/1".into(),
                mass_terms: vec![(2, "1/192".into())],
                xi_is_cycle: true,
                xi_kernel: vec!["1".into()],
                xi_weights: vec!["1".into()],
                xi_stab_orders: vec!["384".into()],
                all_pass: true,
            }),
        };
        let round = RunDocument::from_json(&doc.to_json().unwrap()).unwrap();
        assert_eq!(round, doc);
    }
}
