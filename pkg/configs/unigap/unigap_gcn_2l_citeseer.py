_base_ = ['./unigap_gcn_2l_cora.py']

dataset = dict(path='{{$UNIGAP_DATA:data}}/citeseer', name='citeseer')
