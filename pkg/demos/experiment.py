"""
A small classification experiment
=================================

Train a linear SVM to tell plus-shaped clouds from X-shaped ones using
PLH features, MLPCA features, and both.  The config is the same dict the
``mlsa run`` command reads from YAML.
"""

from mlsa.experiment import render_table, run_experiment

config = {
    "kind": "crossing",
    "name": "+ vs. X (demo scale)",
    "classes": ["plus", "x"],
    "points_per_instance": 200,
    "train_instances": 4,
    "test_instances": 2,
    "radii": [0.1, 0.2, 0.3],
    "plh_spec": [[0, 6]],
    "seed": 0,
}

rows = run_experiment(config)
print(render_table(config["name"], rows))
