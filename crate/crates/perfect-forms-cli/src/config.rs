use std::path::PathBuf;

use anyhow::{bail, Result};
use perfect_forms::field::Disc;
use perfect_forms::voronoi::ExploreCaps;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Table,
    Json,
}

/// Validated run configuration shared by all subcommands.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub disc: i64,
    pub rank: usize,
    pub out: PathBuf,
    pub checkpoint: Option<PathBuf>,
    pub workers: usize,
    pub format: OutputFormat,
    pub caps: ExploreCaps,
}

impl RunConfig {
    pub fn validate(&self) -> Result<Disc> {
        if self.rank < 1 {
            bail!("rank must be at least 1");
        }
        match Disc::new(self.disc) {
            Ok(k) => Ok(k),
            Err(e) => bail!("{e}"),
        }
    }

    /// Default checkpoint path under the output directory.
    pub fn checkpoint_path(&self) -> PathBuf {
        self.checkpoint.clone().unwrap_or_else(|| {
            self.out
                .join(format!("perfect-forms-{}-{}.jsonl", self.rank, self.disc))
        })
    }

    pub fn cells_path(&self) -> PathBuf {
        self.out
            .join(format!("cells-{}-{}.jsonl", self.rank, self.disc))
    }

    pub fn document_path(&self) -> PathBuf {
        self.out.join(format!("run-{}-{}.json", self.rank, self.disc))
    }
}
