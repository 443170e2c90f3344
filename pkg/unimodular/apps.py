from django.apps import AppConfig


class UnimodularConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'unimodular'
    verbose_name = 'Unimodular zero counting'
