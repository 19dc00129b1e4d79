_base_ = ['./gcn_2l_texas.py']

model = dict(type='GraphSAGE')
