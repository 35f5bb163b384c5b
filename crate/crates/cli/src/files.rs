//! Reading inputs from disk. Tree and chain files name other files by paths
//! relative to their own directory.
//!
//! `.tree`:
//! ```text
//! vertex 0 a.msp
//! vertex 1 b.msp
//! edge 0 1 ab.corr
//! ```
//! Vertex ids are `0..k` in any order; the correspondence of `edge u v` relates
//! points of `u` (left column) to points of `v` (right column).
//!
//! Chain spec:
//! ```text
//! budget
//! space x1.msp
//! link r1.corr
//! space x2.msp
//! ```
//! Spaces and links alternate. The optional `budget` line requires
//! `dis Rₙ < 1/2ⁿ` for every link.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use ghcloud::cloud::ThreadChain;
use ghcloud::gluing::GluingTree;
use ghcloud::hedgehog::HedgehogSpec;
use ghcloud::io::{parse_correspondence, parse_hedgehog, parse_msp};
use ghcloud::{Correspondence, FiniteMetricSpace};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn load_space(path: &Path) -> Result<FiniteMetricSpace> {
    parse_msp(&read(path)?).with_context(|| format!("{}", path.display()))
}

pub fn load_correspondence(path: &Path, x: &FiniteMetricSpace, y: &FiniteMetricSpace) -> Result<Correspondence> {
    parse_correspondence(&read(path)?, x.len(), y.len()).with_context(|| format!("{}", path.display()))
}

pub fn load_hedgehog(path: &Path) -> Result<HedgehogSpec> {
    parse_hedgehog(&read(path)?).with_context(|| format!("{}", path.display()))
}

/// Nonempty, comment-stripped lines with their 1-based numbers.
fn directives(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let words: Vec<&str> = line.split('#').next().unwrap_or("").split_whitespace().collect();
        (!words.is_empty()).then_some((i + 1, words))
    })
}

fn relative(base: &Path, file: &str) -> PathBuf {
    base.parent().unwrap_or(Path::new(".")).join(file)
}

fn index(word: &str, path: &Path, line: usize) -> Result<usize> {
    word.parse()
        .with_context(|| format!("{}:{line}: expected a vertex id, found `{word}`", path.display()))
}

pub fn load_tree(path: &Path) -> Result<GluingTree> {
    let text = read(path)?;
    let mut vertices: Vec<Option<FiniteMetricSpace>> = Vec::new();
    let mut edges: Vec<(usize, usize, String, usize)> = Vec::new();
    for (line, words) in directives(&text) {
        match words.as_slice() {
            ["vertex", id, file] => {
                let id = index(id, path, line)?;
                if vertices.len() <= id {
                    vertices.resize(id + 1, None);
                }
                if vertices[id].is_some() {
                    bail!("{}:{line}: vertex {id} declared twice", path.display());
                }
                vertices[id] = Some(load_space(&relative(path, file))?);
            }
            ["edge", u, v, file] => {
                edges.push((index(u, path, line)?, index(v, path, line)?, file.to_string(), line));
            }
            _ => bail!(
                "{}:{line}: expected `vertex <id> <file>` or `edge <u> <v> <file>`",
                path.display()
            ),
        }
    }
    let vertices: Vec<FiniteMetricSpace> = vertices
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.with_context(|| format!("{}: vertex {i} is missing", path.display())))
        .collect::<Result<_>>()?;
    let mut resolved = Vec::with_capacity(edges.len());
    for (u, v, file, line) in edges {
        if u >= vertices.len() || v >= vertices.len() {
            bail!("{}:{line}: edge {u}-{v} names an undeclared vertex", path.display());
        }
        let r = load_correspondence(&relative(path, &file), &vertices[u], &vertices[v])?;
        resolved.push((u, v, r));
    }
    GluingTree::new(vertices, resolved).with_context(|| format!("{}", path.display()))
}

pub fn load_chain(path: &Path) -> Result<ThreadChain> {
    let text = read(path)?;
    let mut budget = false;
    let mut spaces: Vec<FiniteMetricSpace> = Vec::new();
    let mut link_files: Vec<(PathBuf, usize)> = Vec::new();
    for (line, words) in directives(&text) {
        match words.as_slice() {
            ["budget"] => budget = true,
            ["space", file] => {
                if spaces.len() != link_files.len() {
                    bail!("{}:{line}: two spaces in a row; a link must come between", path.display());
                }
                spaces.push(load_space(&relative(path, file))?);
            }
            ["link", file] => {
                if spaces.len() != link_files.len() + 1 {
                    bail!("{}:{line}: a link must follow a space", path.display());
                }
                link_files.push((relative(path, file), line));
            }
            _ => bail!(
                "{}:{line}: expected `space <file>`, `link <file>` or `budget`",
                path.display()
            ),
        }
    }
    if spaces.is_empty() || spaces.len() != link_files.len() + 1 {
        bail!("{}: the chain must start and end with a space", path.display());
    }
    let links = link_files
        .iter()
        .enumerate()
        .map(|(n, (file, _))| load_correspondence(file, &spaces[n], &spaces[n + 1]))
        .collect::<Result<Vec<_>>>()?;
    let chain = if budget {
        ThreadChain::with_budget(spaces, links)
    } else {
        ThreadChain::new(spaces, links)
    };
    chain.with_context(|| format!("{}", path.display()))
}
