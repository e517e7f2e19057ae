//! Candidate-site files: `site.<index>.<field> = value`, with fields
//! `r1h_m`, `lateral_offset_m` and `ris_height_m`. Indices must run
//! 0, 1, 2, ... without gaps.

use std::collections::BTreeSet;

use ris_autonomy::config::ConfigMap;
use ris_autonomy::{ConfigError, Site};

pub fn parse_sites(mut map: ConfigMap) -> Result<Vec<Site>, ConfigError> {
    let mut indices = BTreeSet::new();
    for key in map.keys() {
        let index = key
            .strip_prefix("site.")
            .and_then(|rest| rest.split_once('.'))
            .and_then(|(i, _)| i.parse::<usize>().ok())
            .ok_or_else(|| ConfigError::UnknownKey(key.to_string()))?;
        indices.insert(index);
    }
    if indices.is_empty() {
        return Err(ConfigError::Invalid {
            key: "site".into(),
            reason: "no sites listed".into(),
        });
    }
    let mut sites = Vec::with_capacity(indices.len());
    for i in 0..indices.len() {
        sites.push(Site {
            r1h_m: map.require(&format!("site.{i}.r1h_m"))?,
            lateral_offset_m: map.require(&format!("site.{i}.lateral_offset_m"))?,
            ris_height_m: map.require(&format!("site.{i}.ris_height_m"))?,
        });
    }
    map.finish()?;
    Ok(sites)
}
