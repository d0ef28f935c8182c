use super::witness::WitnessPath;
use std::io::{self, Write};

/// One row per sample: `path_index, t, r00..r22, z0..z{m-1}, jump`, where
/// `jump` is the latent distance from the previous sample (0 for the first).
pub fn write_witness_csv<W: Write>(paths: &[WitnessPath], mut out: W) -> io::Result<()> {
    let latent_dim = paths.iter().flat_map(|p| p.latent.points.first()).map(Vec::len).max().unwrap_or(0);
    let mut header = vec!["path_index".to_string(), "t".to_string()];
    header.extend((0..3).flat_map(|r| (0..3).map(move |c| format!("r{r}{c}"))));
    header.extend((0..latent_dim).map(|k| format!("z{k}")));
    header.push("jump".into());
    writeln!(out, "{}", header.join(","))?;

    for (index, wp) in paths.iter().enumerate() {
        for (k, (r, z)) in wp.path.points().iter().zip(&wp.latent.points).enumerate() {
            let jump = if k == 0 { 0.0 } else { wp.latent.jump_profile[k - 1] };
            let mut row = vec![index.to_string(), format!("{}", wp.path.params()[k])];
            row.extend(r.to_flat().iter().map(|v| format!("{v}")));
            row.extend((0..latent_dim).map(|j| z.get(j).map_or(String::new(), |v| format!("{v}"))));
            row.push(format!("{jump}"));
            writeln!(out, "{}", row.join(","))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::{normalize, Rotation};
    use crate::topology::{encode_path, make_rotation_loop, LatentMetric};

    #[test]
    fn csv_has_one_row_per_sample() {
        let p = make_rotation_loop(normalize([0.0, 0.0, 1.0]).unwrap(), std::f64::consts::TAU, 16).unwrap();
        let latent =
            encode_path(|x| Ok(x[..2].to_vec()), &p, |r: &Rotation| r.to_flat().to_vec(), LatentMetric::Euclidean)
                .unwrap();
        let mut buf = Vec::new();
        write_witness_csv(&[WitnessPath { path: p, latent }], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 17);
        assert_eq!(lines[0], "path_index,t,r00,r01,r02,r10,r11,r12,r20,r21,r22,z0,z1,jump");
        assert!(lines.iter().all(|l| l.split(',').count() == 14));
        assert!(lines[1].ends_with(",0"));
    }
}
