_base_ = ['../_base_/default_runtime.py', '../_base_/datasets/cora.py']

variant = dict(type='adaedge', budget_ratio=0.01, aux_weight=1.0)
