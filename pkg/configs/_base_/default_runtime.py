# epoch loop defaults shared by every run config
model = dict(
    type='GCN',
    hidden_channels=64,
    num_layers=2,
    activation='relu',
    dropout=0.5)
optim = dict(type='Adam', lr=0.01, weight_decay=5e-4)
train_cfg = dict(
    beta=1.0,
    temperature=1.0,
    warmup_epochs=10,
    max_epochs=1000,
    patience=100,
    log_interval=10)
seeds = list(range(20))
