_base_ = ['./unigap_gcn_2l_texas.py']

model = dict(type='GraphSAGE')
