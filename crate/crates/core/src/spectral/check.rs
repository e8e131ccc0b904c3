use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// The statement does not apply to this input (wrong kernel or scheme).
    NotApplicable,
    /// The statement's hypotheses fail numerically (zero mean, repeated
    /// leading eigenvalue); nothing was evaluated.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Part {
    margin: f64,
    scale: f64,
}

/// Outcome of one verified statement.
///
/// A check is a list of parts, each a margin that must satisfy
/// `margin ≥ −factor · scale`. Identities contribute `margin = −|residual|`.
/// The reported margin and tolerance are those of the part closest to
/// failing, relative to its scale.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    name: String,
    factor: f64,
    parts: Vec<Part>,
    skipped: Option<CheckStatus>,
    note: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, factor: f64) -> Self {
        Self {
            name: name.into(),
            factor,
            parts: Vec::new(),
            skipped: None,
            note: None,
        }
    }

    pub fn not_applicable(name: impl Into<String>, reason: impl Into<String>) -> Self {
        let mut c = Self::new(name, 0.0);
        c.skipped = Some(CheckStatus::NotApplicable);
        c.note = Some(reason.into());
        c
    }

    pub fn degenerate(name: impl Into<String>, reason: impl Into<String>) -> Self {
        let mut c = Self::new(name, 0.0);
        c.skipped = Some(CheckStatus::Degenerate);
        c.note = Some(reason.into());
        c
    }

    /// Requires `margin ≥ −factor · scale`.
    pub fn at_least(&mut self, margin: f64, scale: f64) -> &mut Self {
        self.parts.push(Part {
            margin,
            scale: positive_scale(scale),
        });
        self
    }

    /// Requires `|residual| ≤ factor · scale`.
    pub fn equal(&mut self, residual: f64, scale: f64) -> &mut Self {
        self.at_least(-residual.abs(), scale)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn done(&mut self) -> Self {
        self.clone()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn note(&self) -> Option<&str> {
        self.note.as_deref()
    }

    pub fn factor(&self) -> f64 {
        self.factor
    }

    /// Replaces the relative tolerance factor. Skipped checks are unaffected.
    pub fn set_factor(&mut self, factor: f64) {
        if self.skipped.is_none() {
            self.factor = factor;
        }
    }

    fn worst(&self) -> Option<&Part> {
        self.parts.iter().min_by(|a, b| {
            let ra = a.margin / a.scale;
            let rb = b.margin / b.scale;
            // NaN sorts first so it is reported.
            match (ra.is_nan(), rb.is_nan()) {
                (true, _) => std::cmp::Ordering::Less,
                (_, true) => std::cmp::Ordering::Greater,
                _ => ra.total_cmp(&rb),
            }
        })
    }

    pub fn margin(&self) -> f64 {
        self.worst().map_or(0.0, |p| p.margin)
    }

    pub fn tolerance(&self) -> f64 {
        if self.skipped.is_some() {
            return 0.0;
        }
        self.factor * self.worst().map_or(1.0, |p| p.scale)
    }

    pub fn status(&self) -> CheckStatus {
        if let Some(s) = self.skipped {
            return s;
        }
        let ok = self
            .parts
            .iter()
            .all(|p| p.margin.is_finite() && p.margin >= -self.factor * p.scale)
            && (self.factor >= 0.0 || !self.parts.is_empty());
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }

    pub fn passed(&self) -> bool {
        self.status() != CheckStatus::Fail
    }

    /// Number of evaluated inequalities or identities.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

fn positive_scale(scale: f64) -> f64 {
    let s = scale.abs();
    if s > 0.0 && s.is_finite() {
        s
    } else {
        1.0
    }
}

impl Serialize for Check {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let fields = if self.note.is_some() { 6 } else { 5 };
        let mut s = serializer.serialize_struct("Check", fields)?;
        s.serialize_field("name", &self.name)?;
        s.serialize_field("margin", &self.margin())?;
        s.serialize_field("tolerance", &self.tolerance())?;
        s.serialize_field("passed", &self.passed())?;
        s.serialize_field("status", &self.status())?;
        if let Some(note) = &self.note {
            s.serialize_field("note", note)?;
        }
        s.end()
    }
}
