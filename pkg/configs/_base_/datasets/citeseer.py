# bundle written by `unigap ingest`; $UNIGAP_DATA points at the bundle root
dataset = dict(path='{{$UNIGAP_DATA:data}}/citeseer', name='citeseer')
