_base_ = ['../_base_/default_runtime.py', '../_base_/datasets/texas.py']

model = dict(hidden_channels=32, dropout=0.3)
optim = dict(lr=5e-3, weight_decay=1e-3)
variant = dict(type='baseline')
