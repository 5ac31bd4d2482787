//! Parameter grid parsing: `start:stop:count` (inclusive) or comma lists.

pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let spec = spec.trim();
    if spec.is_empty() {
        return Err("empty grid".into());
    }
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid `{spec}` must be start:stop:count"));
        }
        let start: f64 = parts[0]
            .parse()
            .map_err(|_| format!("bad grid start `{}`", parts[0]))?;
        let stop: f64 = parts[1]
            .parse()
            .map_err(|_| format!("bad grid stop `{}`", parts[1]))?;
        let count: usize = parts[2]
            .parse()
            .map_err(|_| format!("bad grid count `{}`", parts[2]))?;
        if count == 0 {
            return Err("grid count must be at least 1".into());
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err("grid bounds must be finite".into());
        }
        if count == 1 {
            return Ok(vec![start]);
        }
        let step = (stop - start) / (count - 1) as f64;
        return Ok((0..count).map(|i| start + step * i as f64).collect());
    }
    spec.split(',')
        .map(|tok| {
            let v: f64 = tok
                .trim()
                .parse()
                .map_err(|_| format!("bad grid value `{tok}`"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(format!("non-finite grid value `{tok}`"))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_grid_is_inclusive() {
        let g = parse_grid("0.8:1.0:21").unwrap();
        assert_eq!(g.len(), 21);
        assert!((g[0] - 0.8).abs() < 1e-15);
        assert!((g[20] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn comma_list_and_single_value() {
        assert_eq!(parse_grid("0.1, 0.2,0.3").unwrap().len(), 3);
        assert_eq!(parse_grid("0.9848").unwrap(), vec![0.9848]);
    }

    #[test]
    fn bad_grids_rejected() {
        assert!(parse_grid("").is_err());
        assert!(parse_grid("1:2").is_err());
        assert!(parse_grid("1:2:0").is_err());
        assert!(parse_grid("a,b").is_err());
    }
}
