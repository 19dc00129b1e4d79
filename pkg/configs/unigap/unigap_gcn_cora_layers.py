_base_ = ['./unigap_gcn_2l_cora.py']

layers = [1, 2, 3, 4, 5, 6, 7, 8]
methods = ['baseline', 'halfhop', 'adaedge', 'unigap']
method_variants = dict(halfhop=dict(type='halfhop', p=0.5, alpha=0.5))
seeds = [0]
train_cfg = dict(dump_insertions=False)
