//! Input plumbing. One --input flag carries every input: comma-separated
//! entries, each `PATH` or `key=PATH`, with `-` reading standard input
//! (at most once per invocation).

use std::fs;
use std::io::Read;

use ramsey_core::codec::{read_edge_list, read_graph6, read_ocg_json};
use ramsey_core::{Graph, OrderedColoredGraph};

use crate::{CliError, FormatArg};

pub struct Entry {
    pub key: Option<String>,
    pub text: String,
}

pub fn read_entries(input: Option<&str>) -> Result<Vec<Entry>, CliError> {
    let Some(input) = input else {
        return Ok(Vec::new());
    };
    let mut used_stdin = false;
    let mut entries = Vec::new();
    for part in input.split(',') {
        let part = part.trim();
        if part.is_empty() {
            return Err(CliError::invalid("empty --input entry"));
        }
        let (key, path) = match part.split_once('=') {
            Some((k, p)) => (Some(k.trim().to_string()), p.trim()),
            None => (None, part),
        };
        let text = if path == "-" {
            if used_stdin {
                return Err(CliError::invalid("standard input can be read only once"));
            }
            used_stdin = true;
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::invalid(format!("reading standard input: {e}")))?;
            buf
        } else {
            fs::read_to_string(path)
                .map_err(|e| CliError::invalid(format!("reading {path}: {e}")))?
        };
        entries.push(Entry { key, text });
    }
    Ok(entries)
}

/// The command's one unnamed input.
pub fn single<'a>(entries: &'a [Entry], command: &str) -> Result<&'a Entry, CliError> {
    match entries {
        [only] if only.key.is_none() => Ok(only),
        [] => Err(CliError::invalid(format!("{command} needs --input"))),
        _ => Err(CliError::invalid(format!(
            "{command} takes exactly one unnamed --input entry"
        ))),
    }
}

pub fn keyed<'a>(entries: &'a [Entry], key: &str) -> Result<&'a Entry, CliError> {
    let mut found = entries.iter().filter(|e| e.key.as_deref() == Some(key));
    let first = found
        .next()
        .ok_or_else(|| CliError::invalid(format!("--input needs a {key}= entry")))?;
    if found.next().is_some() {
        return Err(CliError::invalid(format!(
            "--input has more than one {key}= entry"
        )));
    }
    Ok(first)
}

pub fn keyed_all<'a>(entries: &'a [Entry], key: &str) -> Vec<&'a Entry> {
    entries
        .iter()
        .filter(|e| e.key.as_deref() == Some(key))
        .collect()
}

/// Bare graph for the counting commands. Colored payloads are rejected,
/// not silently stripped.
pub fn plain_graph(entry: &Entry, format: FormatArg) -> Result<Graph, CliError> {
    match format {
        FormatArg::Graph6 => Ok(read_graph6(entry.text.trim())?),
        FormatArg::Edges => Ok(read_edge_list(&entry.text)?),
        FormatArg::OcgJson => {
            let ocg = read_ocg_json(entry.text.trim())?;
            if ocg.coloring().is_some() {
                return Err(CliError::invalid(
                    "this command takes an uncolored graph; the input carries a coloring",
                ));
            }
            Ok(ocg.graph().clone())
        }
    }
}

/// Structure input for arrow queries: encoded structures pass through,
/// bare graphs become ordered uncolored over universe n.
pub fn structure(
    entry: &Entry,
    format: FormatArg,
    n: usize,
) -> Result<OrderedColoredGraph, CliError> {
    match format {
        FormatArg::Graph6 => Ok(OrderedColoredGraph::with_order(
            read_graph6(entry.text.trim())?,
            n,
        )?),
        FormatArg::Edges => Ok(OrderedColoredGraph::with_order(
            read_edge_list(&entry.text)?,
            n,
        )?),
        FormatArg::OcgJson => Ok(read_ocg_json(entry.text.trim())?),
    }
}

/// Colored ordered host, always in ocg-json (no other format carries a
/// coloring).
pub fn host_structure(entry: &Entry) -> Result<OrderedColoredGraph, CliError> {
    Ok(read_ocg_json(entry.text.trim())?)
}
