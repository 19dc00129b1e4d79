_base_ = ['../_base_/default_runtime.py', '../_base_/datasets/cora.py']

variant = dict(
    type='unigap',
    trajectory=dict(type='MessagePassingTrajectory', norm_period=2),
    encoder=dict(type='TrajectoryMLPMixer'),
    upsampler=dict(type='AdaptiveUpsampler', init_mode='adaptive'))
train_cfg = dict(dump_insertions=True)
