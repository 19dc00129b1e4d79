_base_ = ['../_base_/default_runtime.py', '../_base_/datasets/cora.py']

variant = dict(type='baseline')
