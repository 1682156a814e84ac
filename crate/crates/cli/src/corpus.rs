//! The built-in fixture corpus.

use std::path::Path;

use tensorcoh::checks::REGISTRY;

use crate::dsl::{self, Script, StmtKind};
use crate::runner::InputError;

#[derive(Debug, Clone)]
pub struct Fixture {
    pub id: String,
    /// File name, for diagnostics.
    pub source: String,
    pub text: String,
    /// Require a `fixture` header naming `id`.
    pub strict: bool,
}

impl Fixture {
    pub fn new(id: impl Into<String>, source: impl Into<String>, text: impl Into<String>) -> Self {
        Fixture { id: id.into(), source: source.into(), text: text.into(), strict: true }
    }

    /// Parses the script and validates the header against the fixture id
    /// and the registry anchors.
    pub fn parse(&self) -> Result<Script, InputError> {
        let err = |message: String| InputError { source: self.source.clone(), message };
        let script = dsl::parse(&self.text).map_err(|e| err(e.to_string()))?;
        match script.fixture_id() {
            Some(id) if id == self.id || !self.strict => {}
            Some(id) => return Err(err(format!("1:1: header names `{id}` but the file is `{}`", self.id))),
            None if self.strict => return Err(err("1:1: missing `fixture` header".into())),
            None => {}
        }
        for stmt in &script.stmts {
            if let StmtKind::Anchor(a) = &stmt.kind {
                if !REGISTRY.iter().any(|s| s.anchor == a) {
                    return Err(err(format!("{}: anchor \"{a}\" is not a registry anchor", stmt.span)));
                }
            }
        }
        Ok(script)
    }
}

macro_rules! fixtures {
    ($($id:literal),* $(,)?) => {
        &[$(($id, include_str!(concat!("../corpus/", $id, ".tc")))),*]
    };
}

static BUILTIN: &[(&str, &str)] = fixtures![
    "koszul-betti-2",
    "koszul-betti-3",
    "koszul-betti-4",
    "koszul-betti-5",
    "f-m2",
    "f-claimA-m3",
    "f-claimA-primary",
    "f-55i-d4",
    "f-55ii-d4",
    "f-param",
    "free-2au",
    "gor-ht2",
    "depthseq-pd-one",
    "depthseq-maximal-2",
    "depthseq-maximal-3",
    "depthseq-parameter",
    "quadric-cone",
    "veronese-canonical",
    "g-vanish-syzygies",
    "g-vanish-general-ideal",
    "g-vanish-pd-infinite",
    "gc-vanish",
    "bounds-finite-length",
    "bounds-regular",
    "bounds-dim-one",
    "bounds-buchsbaum",
    "vasc-81",
    "f-54",
    "f-dualpair",
    "f-bv",
    "freeness-regular",
    "free-hyp2",
    "yoshida",
    "explore-lemma-0",
];

/// Built-in fixtures in corpus order.
pub fn builtin() -> Vec<Fixture> {
    BUILTIN
        .iter()
        .map(|(id, text)| Fixture::new(*id, format!("{id}.tc"), *text))
        .collect()
}

pub fn find(id: &str) -> Option<Fixture> {
    builtin().into_iter().find(|f| f.id == id)
}

/// Loads every `.tc` file of a directory, sorted by file name.
pub fn load_dir(dir: &Path) -> std::io::Result<Vec<Fixture>> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.extension().is_some_and(|e| e == "tc"));
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let id = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            Ok(Fixture::new(id, p.display().to_string(), std::fs::read_to_string(&p)?))
        })
        .collect()
}

/// Loads a single script file; its id is the file stem.
pub fn load_file(path: &Path) -> std::io::Result<Fixture> {
    let id = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
    let mut f = Fixture::new(id, path.display().to_string(), std::fs::read_to_string(path)?);
    f.strict = false;
    Ok(f)
}
