// SPDX-License-Identifier: Apache-2.0

//! Reader for the MCNC YAL netlist format.
//!
//! Only the subset used by the block-packing benchmarks is understood:
//! `MODULE`, `TYPE`, `DIMENSIONS`, `IOLIST`/`ENDIOLIST`, `NETWORK`/`ENDNETWORK`
//! and `ENDMODULE`. `CURRENT`, `VOLTAGE`, `PROFILE` statements and
//! `PLACEMENT` sections are skipped. Comments use `/* ... */`.
//!
//! A YAL document is a sequence of `;`-terminated statements. Leaf modules
//! declare a block outline and its terminals; the single `PARENT` module
//! carries the `NETWORK` section that instantiates blocks and binds signals
//! positionally.

use indexmap::{IndexMap, IndexSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum YalError {
    #[error("line {line}: {reason}")]
    SyntaxError { line: usize, reason: String },
    #[error("instance `{instance}` references undeclared module `{module}`")]
    UnknownModule { instance: String, module: String },
    #[error("no NETWORK section found")]
    MissingParent,
}

fn syntax(line: usize, reason: impl Into<String>) -> YalError {
    YalError::SyntaxError {
        line,
        reason: reason.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModuleType {
    Standard,
    General,
    Parent,
    Pad,
}

impl ModuleType {
    fn parse(token: &str) -> Option<Self> {
        match token {
            "STANDARD" => Some(Self::Standard),
            "GENERAL" => Some(Self::General),
            "PARENT" => Some(Self::Parent),
            "PAD" => Some(Self::Pad),
            _ => None,
        }
    }

    /// Standard and general modules are the placeable blocks.
    pub fn is_block(self) -> bool {
        matches!(self, Self::Standard | Self::General)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IoKind {
    Input,
    Output,
    Bidirectional,
    Unknown,
}

impl IoKind {
    fn parse(token: &str) -> Self {
        match token {
            "I" | "PI" => Self::Input,
            "O" | "PO" => Self::Output,
            "B" | "PB" => Self::Bidirectional,
            _ => Self::Unknown,
        }
    }
}

/// A module terminal. Coordinates are relative to the lower-left corner of
/// the module's bounding rectangle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Terminal {
    pub name: String,
    pub x: f64,
    pub y: f64,
    pub io_kind: IoKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YalModule {
    pub name: String,
    pub module_type: ModuleType,
    pub width: f64,
    pub height: f64,
    pub terminals: Vec<Terminal>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub name: String,
    pub module: String,
    /// Signal names in terminal order.
    pub signals: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Netlist {
    pub modules: IndexMap<String, YalModule>,
    pub instances: Vec<Instance>,
    /// Signal name to the instances binding it, both in first-appearance order.
    pub nets: IndexMap<String, IndexSet<String>>,
}

impl Netlist {
    pub fn module_of(&self, instance: &Instance) -> &YalModule {
        // parse_yal guarantees every instance resolves
        &self.modules[&instance.module]
    }

    pub fn instance(&self, name: &str) -> Option<&Instance> {
        self.instances.iter().find(|i| i.name == name)
    }
}

/// Instances whose module is a placeable block, in declaration order.
pub fn block_instances(netlist: &Netlist) -> Vec<&str> {
    netlist
        .instances
        .iter()
        .filter(|i| netlist.module_of(i).module_type.is_block())
        .map(|i| i.name.as_str())
        .collect()
}

struct Statement<'a> {
    line: usize,
    tokens: Vec<&'a str>,
}

fn strip_comments(text: &str) -> Result<String, YalError> {
    let mut out = String::with_capacity(text.len());
    let mut rest = text;
    let mut line = 1;
    while let Some(start) = rest.find("/*") {
        out.push_str(&rest[..start]);
        line += rest[..start].matches('\n').count();
        let body = &rest[start + 2..];
        let end = body
            .find("*/")
            .ok_or_else(|| syntax(line, "unterminated comment"))?;
        // keep newlines so statement line numbers stay accurate
        let newlines = body[..end].matches('\n').count();
        line += newlines;
        out.push(' ');
        out.extend(std::iter::repeat_n('\n', newlines));
        rest = &body[end + 2..];
    }
    out.push_str(rest);
    Ok(out)
}

fn statements(text: &str) -> Result<Vec<Statement<'_>>, YalError> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut rest = text;
    while let Some(end) = rest.find(';') {
        let chunk = &rest[..end];
        let lead = chunk.len() - chunk.trim_start().len();
        let start_line = line + chunk[..lead].matches('\n').count();
        let tokens: Vec<&str> = chunk.split_whitespace().collect();
        if !tokens.is_empty() {
            out.push(Statement {
                line: start_line,
                tokens,
            });
        }
        line += chunk.matches('\n').count();
        rest = &rest[end + 1..];
    }
    if !rest.trim().is_empty() {
        return Err(syntax(line, "trailing text without `;`"));
    }
    Ok(out)
}

fn number(token: &str, line: usize) -> Result<f64, YalError> {
    token
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| syntax(line, format!("expected a number, found `{token}`")))
}

enum Section {
    Body,
    IoList,
    Network,
    Placement,
}

struct ModuleBuilder {
    name: String,
    line: usize,
    module_type: Option<ModuleType>,
    outline: Option<(f64, f64, f64, f64)>,
    terminals: Vec<Terminal>,
    network: Option<Vec<(usize, Instance)>>,
}

type Network = Vec<(usize, Instance)>;

impl ModuleBuilder {
    fn finish(self, end_line: usize) -> Result<(YalModule, Option<Network>), YalError> {
        let module_type = self
            .module_type
            .ok_or_else(|| syntax(self.line, format!("module `{}` has no TYPE", self.name)))?;
        let (min_x, min_y, max_x, max_y) = self.outline.unwrap_or((0.0, 0.0, 0.0, 0.0));
        let width = max_x - min_x;
        let height = max_y - min_y;
        if module_type != ModuleType::Parent && (width <= 0.0 || height <= 0.0) {
            return Err(syntax(
                end_line,
                format!("module `{}` needs a DIMENSIONS outline with positive extent", self.name),
            ));
        }
        let mut seen = IndexSet::new();
        let mut terminals = self.terminals;
        for t in &mut terminals {
            if !seen.insert(t.name.clone()) {
                return Err(syntax(
                    end_line,
                    format!("duplicate terminal `{}` in module `{}`", t.name, self.name),
                ));
            }
            t.x -= min_x;
            t.y -= min_y;
            if self.outline.is_some() && (t.x < 0.0 || t.x > width || t.y < 0.0 || t.y > height) {
                return Err(syntax(
                    end_line,
                    format!(
                        "terminal `{}` of module `{}` lies outside the module outline",
                        t.name, self.name
                    ),
                ));
            }
        }
        if self.network.is_some() && module_type != ModuleType::Parent {
            return Err(syntax(
                self.line,
                format!("NETWORK section in non-parent module `{}`", self.name),
            ));
        }
        Ok((
            YalModule {
                name: self.name,
                module_type,
                width,
                height,
                terminals,
            },
            self.network,
        ))
    }
}

fn outline(tokens: &[&str], line: usize) -> Result<(f64, f64, f64, f64), YalError> {
    if tokens.len() < 4 || !tokens.len().is_multiple_of(2) {
        return Err(syntax(line, "DIMENSIONS needs an even list of at least two vertices"));
    }
    let mut min_x = f64::INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for pair in tokens.chunks(2) {
        let x = number(pair[0], line)?;
        let y = number(pair[1], line)?;
        min_x = min_x.min(x);
        min_y = min_y.min(y);
        max_x = max_x.max(x);
        max_y = max_y.max(y);
    }
    Ok((min_x, min_y, max_x, max_y))
}

/// Parse a YAL document.
pub fn parse_yal(text: &str) -> Result<Netlist, YalError> {
    let cleaned = strip_comments(text)?;
    let stmts = statements(&cleaned)?;

    let mut modules: IndexMap<String, YalModule> = IndexMap::new();
    let mut network: Option<Vec<(usize, Instance)>> = None;
    let mut current: Option<ModuleBuilder> = None;
    let mut section = Section::Body;

    for st in &stmts {
        let head = st.tokens[0];
        let args = &st.tokens[1..];
        let Some(module) = current.as_mut() else {
            if head != "MODULE" {
                return Err(syntax(st.line, format!("expected MODULE, found `{head}`")));
            }
            let [name] = args else {
                return Err(syntax(st.line, "MODULE takes exactly one name"));
            };
            if modules.contains_key(*name) {
                return Err(syntax(st.line, format!("module `{name}` declared twice")));
            }
            current = Some(ModuleBuilder {
                name: name.to_string(),
                line: st.line,
                module_type: None,
                outline: None,
                terminals: Vec::new(),
                network: None,
            });
            continue;
        };

        match section {
            Section::IoList => {
                if head == "ENDIOLIST" {
                    section = Section::Body;
                    continue;
                }
                if args.len() < 3 {
                    return Err(syntax(st.line, "terminal needs a name, a type and x y"));
                }
                module.terminals.push(Terminal {
                    name: head.to_string(),
                    io_kind: IoKind::parse(args[0]),
                    x: number(args[1], st.line)?,
                    y: number(args[2], st.line)?,
                });
            }
            Section::Network => {
                if head == "ENDNETWORK" {
                    section = Section::Body;
                    continue;
                }
                let Some((module_name, signals)) = args.split_first() else {
                    return Err(syntax(st.line, "instance needs a module name"));
                };
                let list = module.network.get_or_insert_with(Vec::new);
                if list.iter().any(|(_, i)| i.name == head) {
                    return Err(syntax(st.line, format!("instance `{head}` declared twice")));
                }
                list.push((
                    st.line,
                    Instance {
                        name: head.to_string(),
                        module: module_name.to_string(),
                        signals: signals.iter().map(|s| s.to_string()).collect(),
                    },
                ));
            }
            Section::Placement => {
                if head == "ENDPLACEMENT" {
                    section = Section::Body;
                }
            }
            Section::Body => match head {
                "TYPE" => {
                    let [t] = args else {
                        return Err(syntax(st.line, "TYPE takes exactly one value"));
                    };
                    module.module_type = Some(
                        ModuleType::parse(t)
                            .ok_or_else(|| syntax(st.line, format!("unsupported module type `{t}`")))?,
                    );
                }
                "DIMENSIONS" => module.outline = Some(outline(args, st.line)?),
                "IOLIST" => section = Section::IoList,
                "NETWORK" => {
                    if network.is_some() || module.network.is_some() {
                        return Err(syntax(st.line, "more than one NETWORK section"));
                    }
                    module.network = Some(Vec::new());
                    section = Section::Network;
                }
                "PLACEMENT" => section = Section::Placement,
                "CURRENT" | "VOLTAGE" | "PROFILE" => {}
                "ENDMODULE" => {
                    let builder = current.take().expect("inside a module");
                    let (m, net) = builder.finish(st.line)?;
                    if net.is_some() {
                        network = net;
                    }
                    modules.insert(m.name.clone(), m);
                }
                other => {
                    return Err(syntax(st.line, format!("unexpected statement `{other}`")));
                }
            },
        }
    }
    if let Some(m) = current {
        return Err(syntax(m.line, format!("module `{}` is missing ENDMODULE", m.name)));
    }

    let network = network.ok_or(YalError::MissingParent)?;
    let mut instances = Vec::with_capacity(network.len());
    let mut nets: IndexMap<String, IndexSet<String>> = IndexMap::new();
    for (line, inst) in network {
        let module = modules.get(&inst.module).ok_or_else(|| YalError::UnknownModule {
            instance: inst.name.clone(),
            module: inst.module.clone(),
        })?;
        if module.module_type == ModuleType::Parent {
            return Err(syntax(
                line,
                format!("instance `{}` instantiates the parent module", inst.name),
            ));
        }
        for s in &inst.signals {
            nets.entry(s.clone()).or_default().insert(inst.name.clone());
        }
        instances.push(inst);
    }

    Ok(Netlist {
        modules,
        instances,
        nets,
    })
}
