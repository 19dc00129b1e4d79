_base_ = ['./unigap_gcn_2l_cora.py']

dataset = dict(path='{{$UNIGAP_DATA:data}}/texas', name='texas')
# small heterophilic graph: wider grid point, longer warmup
model = dict(hidden_channels=32, dropout=0.3)
optim = dict(lr=5e-3, weight_decay=1e-3)
train_cfg = dict(warmup_epochs=20)
