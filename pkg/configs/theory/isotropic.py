# sigma = I: decay slopes have closed forms, ratio tends to 1/2
sigma = 1.0
dim = 4
p = 0.5
k_max = 32
lam = 1e-3
gamma = 0.1
# noisy features on a dense graph: a few rounds of smoothing beat none,
# many rounds wash the signal out
density = 20.0
feature_noise = 2.0
seeds = [0, 1, 2, 3, 4]
