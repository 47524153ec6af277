//! One app-store listing and its optional specialist labels.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Store {
    Android,
    Ios,
    Other,
}

impl Store {
    pub fn as_str(self) -> &'static str {
        match self {
            Store::Android => "android",
            Store::Ios => "ios",
            Store::Other => "other",
        }
    }
}

impl FromStr for Store {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "android" => Ok(Store::Android),
            "ios" => Ok(Store::Ios),
            "other" => Ok(Store::Other),
            _ => Err(s.to_string()),
        }
    }
}

impl fmt::Display for Store {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AppType {
    BreastCancer,
    Health,
    Misc,
}

impl AppType {
    pub fn as_str(self) -> &'static str {
        match self {
            AppType::BreastCancer => "breast_cancer",
            AppType::Health => "health",
            AppType::Misc => "misc",
        }
    }
}

impl FromStr for AppType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "breast_cancer" => Ok(AppType::BreastCancer),
            "health" => Ok(AppType::Health),
            "misc" => Ok(AppType::Misc),
            _ => Err(s.to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AppRecord {
    pub id: String,
    pub store: Store,
    pub title: String,
    #[serde(default)]
    pub description: String,
    /// Specialist gold standard: gamification present (1) or absent (0).
    #[serde(default, with = "label01", skip_serializing_if = "Option::is_none")]
    pub gamification_label: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub app_type: Option<AppType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
}

impl AppRecord {
    pub fn new(
        id: impl Into<String>,
        store: Store,
        title: impl Into<String>,
        description: impl Into<String>,
    ) -> Self {
        Self {
            id: id.into(),
            store,
            title: title.into(),
            description: description.into(),
            gamification_label: None,
            app_type: None,
            language: None,
        }
    }

    pub fn with_label(mut self, label: bool) -> Self {
        self.gamification_label = Some(label);
        self
    }

    pub fn with_app_type(mut self, app_type: AppType) -> Self {
        self.app_type = Some(app_type);
        self
    }

    /// The description is missing or blank.
    pub fn has_no_text(&self) -> bool {
        self.description.trim().is_empty()
    }
}

/// Labels travel as the integers 0/1.
pub(crate) mod label01 {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Option<bool>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(b) => s.serialize_u8(u8::from(*b)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<bool>, D::Error> {
        match Option::<u8>::deserialize(d)? {
            None => Ok(None),
            Some(0) => Ok(Some(false)),
            Some(1) => Ok(Some(true)),
            Some(other) => Err(D::Error::custom(format!(
                "gamification_label must be 0 or 1, got {other}"
            ))),
        }
    }

    pub fn parse(text: &str) -> Result<Option<bool>, String> {
        match text.trim() {
            "" => Ok(None),
            "0" => Ok(Some(false)),
            "1" => Ok(Some(true)),
            other => Err(format!("gamification_label must be 0 or 1, got {other:?}")),
        }
    }
}
