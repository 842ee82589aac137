use serde_json::Value;

use crate::error::{Result, SwarmError};

/// Set `key` (dot separated, numeric segments index arrays) in a JSON value. Intermediate objects
/// must exist; the last segment may add a new object member.
pub fn set_path(root: &mut Value, key: &str, value: Value) -> Result<()> {
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(SwarmError::Config(format!("bad key path '{key}'")));
    }
    let mut cur = root;
    for (k, part) in parts.iter().enumerate() {
        let last = k + 1 == parts.len();
        cur = match cur {
            Value::Object(map) => {
                if last {
                    map.insert(part.to_string(), value);
                    return Ok(());
                }
                map.get_mut(*part)
                    .ok_or_else(|| SwarmError::Config(format!("key '{key}': no member '{part}'")))?
            }
            Value::Array(items) => {
                let idx: usize = part
                    .parse()
                    .map_err(|_| SwarmError::Config(format!("key '{key}': '{part}' is not an index")))?;
                let len = items.len();
                let slot = items
                    .get_mut(idx)
                    .ok_or_else(|| SwarmError::Config(format!("key '{key}': index {idx} out of range ({len})")))?;
                if last {
                    *slot = value;
                    return Ok(());
                }
                slot
            }
            _ => return Err(SwarmError::Config(format!("key '{key}': '{part}' is below a scalar"))),
        };
    }
    unreachable!("loop returns on the last segment")
}

/// Parse a command-line value: JSON when it parses, a plain string otherwise.
pub fn parse_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

/// Split `key=value`.
pub fn parse_assignment(s: &str) -> Result<(String, Value)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| SwarmError::Config(format!("expected key=value, got '{s}'")))?;
    Ok((k.trim().to_string(), parse_value(v.trim())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn paths() {
        let mut v = json!({"a": {"b": [1, {"c": 2}]}});
        set_path(&mut v, "a.b.1.c", json!(5)).unwrap();
        set_path(&mut v, "a.b.0", json!("x")).unwrap();
        set_path(&mut v, "a.d", json!(true)).unwrap();
        assert_eq!(v, json!({"a": {"b": ["x", {"c": 5}], "d": true}}));
        assert!(set_path(&mut v, "a.z.q", json!(1)).is_err());
        assert!(set_path(&mut v, "a.b.7", json!(1)).is_err());
        assert!(set_path(&mut v, "a..b", json!(1)).is_err());
        assert_eq!(parse_assignment("sim.dt=0.5").unwrap(), ("sim.dt".into(), json!(0.5)));
        assert_eq!(parse_value("mill"), json!("mill"));
    }
}
