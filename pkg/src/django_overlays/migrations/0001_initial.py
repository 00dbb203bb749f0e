# Generated by Django 5.2.1 on 2025-07-02 09:41

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='PipelineRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(help_text='Pipeline step that was run (gen, layer, build, verify, solve, ptas)', max_length=32, verbose_name='command')),
                ('config', models.JSONField(default=dict, help_text='Fully resolved pipeline configuration', verbose_name='configuration')),
                ('report', models.JSONField(blank=True, default=dict, help_text='Report produced by the run, or the error it raised', verbose_name='report')),
                ('exit_code', models.PositiveSmallIntegerField(default=0, help_text='0 ok, 1 usage or pipeline error, 2 certificate failure, 3 infeasible', verbose_name='exit code')),
                ('seed', models.PositiveIntegerField(default=0, verbose_name='seed')),
                ('created', models.DateTimeField(auto_now_add=True, verbose_name='created')),
            ],
            options={
                'verbose_name': 'Pipeline Run',
                'verbose_name_plural': 'Pipeline Runs',
                'ordering': ['-created'],
            },
        ),
    ]
