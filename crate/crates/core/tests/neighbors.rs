use idest::neighbors::{count_within_radius, knn, knn_in_cloud};
use idest::rng::substream;
use idest::PointCloud;
use rand::Rng;

fn brute_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = 0.0;
    for (x, y) in a.iter().zip(b) {
        acc += (x - y) * (x - y);
    }
    acc.sqrt()
}

/// All-pairs scan: sort every other point by (distance, index) and keep the first k.
fn brute_knn(cloud: &PointCloud, k: usize) -> Vec<Vec<(f64, usize)>> {
    (0..cloud.len())
        .map(|i| {
            let mut all: Vec<(f64, usize)> = (0..cloud.len())
                .filter(|&j| j != i)
                .map(|j| (brute_distance(cloud.point(i), cloud.point(j)), j))
                .collect();
            all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            all.truncate(k);
            all
        })
        .collect()
}

fn random_cloud(rng: &mut impl Rng, n: usize, p: usize, grid: bool) -> PointCloud {
    let data: Vec<f64> = (0..n * p)
        .map(|_| if grid { rng.random_range(0..3) as f64 } else { rng.random::<f64>() * 10.0 - 5.0 })
        .collect();
    PointCloud::from_flat(n, p, data).unwrap()
}

#[test]
fn knn_matches_brute_force_on_random_instances() {
    let mut rng = substream(2024, 0);
    for instance in 0..100 {
        let n = rng.random_range(2..60);
        let p = rng.random_range(1..6);
        let k = rng.random_range(1..n);
        // Every fourth instance lives on a coarse grid so ties and duplicates occur.
        let cloud = random_cloud(&mut rng, n, p, instance % 4 == 0);
        let table = knn_in_cloud(&cloud, k).unwrap();
        let oracle = brute_knn(&cloud, k);
        for (i, expected) in oracle.iter().enumerate() {
            let got: Vec<(f64, usize)> =
                table.distances(i).iter().copied().zip(table.indices(i).iter().copied()).collect();
            assert_eq!(&got, expected, "instance {instance}, query {i}");
        }
    }
}

#[test]
fn fifty_point_table() {
    let mut rng = substream(5, 0);
    let cloud = random_cloud(&mut rng, 50, 5, false);
    let table = knn_in_cloud(&cloud, 10).unwrap();
    let oracle = brute_knn(&cloud, 10);
    for (i, expected) in oracle.iter().enumerate() {
        assert_eq!(table.distances(i), expected.iter().map(|e| e.0).collect::<Vec<_>>().as_slice());
        assert_eq!(table.indices(i), expected.iter().map(|e| e.1).collect::<Vec<_>>().as_slice());
    }
}

#[test]
fn external_queries_match_brute_force() {
    let mut rng = substream(6, 0);
    let cloud = random_cloud(&mut rng, 40, 3, false);
    let queries = random_cloud(&mut rng, 7, 3, false);
    let table = knn(&cloud, &queries, 5, false).unwrap();
    for q in 0..queries.len() {
        let mut all: Vec<(f64, usize)> =
            (0..cloud.len()).map(|j| (brute_distance(queries.point(q), cloud.point(j)), j)).collect();
        all.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        assert_eq!(table.indices(q), all[..5].iter().map(|e| e.1).collect::<Vec<_>>().as_slice());
    }
}

#[test]
fn radius_counts_match_linear_scan() {
    let mut rng = substream(7, 0);
    let cloud = random_cloud(&mut rng, 100, 3, false);
    for _ in 0..20 {
        let x: Vec<f64> = (0..3).map(|_| rng.random::<f64>() * 10.0 - 5.0).collect();
        let r = rng.random::<f64>() * 6.0;
        let expected = cloud.points().filter(|p| brute_distance(&x, p) <= r).count();
        assert_eq!(count_within_radius(&cloud, &x, r, None).unwrap(), expected);
    }
}

#[test]
fn kth_distance_is_where_the_count_reaches_k() {
    let mut rng = substream(8, 0);
    let cloud = random_cloud(&mut rng, 80, 4, false);
    let table = knn_in_cloud(&cloud, 12).unwrap();
    for i in 0..cloud.len() {
        for k in 1..=12 {
            let r = table.distance(i, k - 1);
            assert!(count_within_radius(&cloud, cloud.point(i), r, Some(i)).unwrap() >= k);
            let below = r.next_down();
            assert!(count_within_radius(&cloud, cloud.point(i), below, Some(i)).unwrap() < k);
        }
    }
}
