_base_ = ['./unigap_gcn_2l_cora.py']

_mvc_channels = 64

variant = dict(
    trajectory=dict(
        _delete_=True,
        type='PretrainedTrajectory',
        norm_period=2,
        mask_ratio=0.3,
        epochs=100,
        warm_start=True),
    encoder=dict(
        _delete_=True,
        type='TrajectoryTransformer',
        out_channels=_mvc_channels,
        num_heads=2))
optim = dict(
    paramwise_cfg=dict(
        custom_keys={
            'encoder.': dict(lr_mult=0.5),
            'upsampler.': dict(lr_mult=0.5, decay_mult=0.0)
        }))
