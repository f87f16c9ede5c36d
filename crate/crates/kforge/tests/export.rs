use std::sync::Arc;

use kforge::export::export_obj;
use kforge_core::profile::assemble_profile;
use kforge_core::{ChartPoint, GridSpec, ImmersionMap, ProfileParams};

#[test]
fn obj_round_trip() {
    let sol = Arc::new(assemble_profile(&ProfileParams::new(2, 1, 0.2, 0.5, 0.7)).unwrap());
    let m = ImmersionMap::from_shared(sol);
    let grid = GridSpec::whole(64, 32);
    let dir = tempfile::tempdir().unwrap();
    let (obj, csv) = (dir.path().join("m.obj"), dir.path().join("m.csv"));
    let stats = export_obj(&m, &grid, &obj, &csv).unwrap();
    assert_eq!(stats.vertices, 2048);
    assert_eq!(stats.faces, 64 * 31);

    let text = std::fs::read_to_string(&obj).unwrap();
    let mut corners = Vec::new();
    for line in text.lines().filter(|l| l.starts_with("f ")) {
        let idx: Vec<usize> = line[2..].split_whitespace().map(|t| t.parse().unwrap()).collect();
        assert_eq!(idx.len(), 4, "{line}");
        assert!(idx.iter().all(|&i| (1..=2048).contains(&i)), "{line}");
        corners.extend(idx);
    }
    assert_eq!(corners.len(), 4 * 64 * 31);

    let nodes = grid.nodes();
    let opts = tobj::LoadOptions {
        triangulate: false,
        single_index: true,
        ..Default::default()
    };
    let (models, _) = tobj::load_obj(&obj, &opts).unwrap();
    assert_eq!(models.len(), 1);
    let mesh = &models[0].mesh;
    assert_eq!(mesh.positions.len(), 3 * 2048);
    assert_eq!(mesh.indices.len(), corners.len());
    // The reader renumbers vertices; match them up through the face corners.
    for (&ours, &theirs) in corners.iter().zip(&mesh.indices) {
        let node = &nodes[ours - 1];
        let x = m.evaluate(&ChartPoint::uv(node.u, node.v)).unwrap();
        let read = &mesh.positions[3 * theirs as usize..3 * theirs as usize + 3];
        for (a, b) in x.iter().zip(read) {
            assert!((a - f64::from(*b)).abs() < 1e-6, "{a} vs {b}");
        }
    }

    let mut reader = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["vertex", "u", "v", "h"]
    );
    assert_eq!(reader.records().count(), 2048);
}
