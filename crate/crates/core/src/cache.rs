//! On-disk cache of graph universes.
//!
//! One JSON line per canonical graph in
//! `<dir>/v{FORMAT_VERSION}/stable_graphs_g{g}_n{n}.jsonl`; the directory
//! comes from `MODCOMP_CACHE` and defaults to `.modcomp-cache/`.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::enumerate::{check_budget, stable_graphs_with_budget, GraphUniverse};
use crate::error::Result;
use crate::graph::DualGraph;

pub const FORMAT_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "MODCOMP_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".modcomp-cache";

#[derive(Clone, Debug)]
pub struct Cache {
    root: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheEntry {
    pub g: u32,
    pub n: u32,
    pub graphs: usize,
    pub path: PathBuf,
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    pub fn from_env() -> Self {
        Cache::new(std::env::var_os(CACHE_ENV).map_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR), PathBuf::from))
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn versioned(&self) -> PathBuf {
        self.root.join(format!("v{}", FORMAT_VERSION))
    }

    pub fn path_for(&self, g: u32, n: u32) -> PathBuf {
        self.versioned().join(format!("stable_graphs_g{}_n{}.jsonl", g, n))
    }

    pub fn load(&self, g: u32, n: u32) -> Result<Option<GraphUniverse>> {
        let path = self.path_for(g, n);
        if !path.exists() {
            return Ok(None);
        }
        let reader = BufReader::new(fs::File::open(&path)?);
        let mut graphs = Vec::new();
        for line in reader.lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            graphs.push(DualGraph::from_json(&line)?);
        }
        let universe = GraphUniverse::from_graphs(g, n, graphs)?;
        Ok(Some(universe))
    }

    pub fn store(&self, universe: &GraphUniverse) -> Result<PathBuf> {
        let path = self.path_for(universe.genus(), universe.marking_count());
        fs::create_dir_all(self.versioned())?;
        let tmp = path.with_extension("jsonl.tmp");
        {
            let mut out = BufWriter::new(fs::File::create(&tmp)?);
            for graph in universe.graphs() {
                out.write_all(graph.to_json().as_bytes())?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    /// Loads the universe from the cache, computing and storing it on a miss.
    pub fn universe(&self, g: u32, n: u32, budget: u32) -> Result<GraphUniverse> {
        check_budget(g, n, budget)?;
        if let Some(u) = self.load(g, n)? {
            return Ok(u);
        }
        let u = stable_graphs_with_budget(g, n, budget)?;
        self.store(&u)?;
        Ok(u)
    }

    pub fn status(&self) -> Result<Vec<CacheEntry>> {
        let dir = self.versioned();
        if !dir.exists() {
            return Ok(Vec::new());
        }
        let mut entries = Vec::new();
        for item in fs::read_dir(&dir)? {
            let path = item?.path();
            let name = match path.file_name().and_then(|s| s.to_str()) {
                Some(s) => s.to_string(),
                None => continue,
            };
            if let Some((g, n)) = parse_name(&name) {
                let graphs = BufReader::new(fs::File::open(&path)?)
                    .lines()
                    .filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty()))
                    .count();
                entries.push(CacheEntry { g, n, graphs, path });
            }
        }
        entries.sort_by_key(|e| (e.g, e.n));
        Ok(entries)
    }

    /// Removes every cached universe; returns how many files were deleted.
    pub fn clear(&self) -> Result<usize> {
        let entries = self.status()?;
        for e in &entries {
            fs::remove_file(&e.path)?;
        }
        Ok(entries.len())
    }
}

fn parse_name(name: &str) -> Option<(u32, u32)> {
    let rest = name.strip_prefix("stable_graphs_g")?.strip_suffix(".jsonl")?;
    let (g, n) = rest.split_once("_n")?;
    Some((g.parse().ok()?, n.parse().ok()?))
}
