_base_ = ['../_base_/default_runtime.py', '../_base_/datasets/cora.py']

variant = dict(type='halfhop', p=0.5, alpha=0.5)
train_cfg = dict(dump_insertions=True)
