from django.contrib import admin
from .models import StudyRun


@admin.register(StudyRun)
class StudyRunAdmin(admin.ModelAdmin):
    list_display = ['id', 'study', 'status', 'failure_count', 'processing_time', 'created_at']
    list_filter = ['study', 'status', 'created_at']
    search_fields = ['id']
    readonly_fields = ['id', 'started_at', 'completed_at', 'processing_time', 'created_at', 'updated_at']

    fieldsets = (
        ('Basic Information', {
            'fields': ('id', 'study', 'status', 'config')
        }),
        ('Outcome', {
            'fields': ('summary', 'failure_count')
        }),
        ('Processing', {
            'fields': ('started_at', 'completed_at', 'processing_time'),
            'classes': ('collapse',)
        }),
        ('Error Information', {
            'fields': ('error_message',),
            'classes': ('collapse',)
        }),
        ('Timestamps', {
            'fields': ('created_at', 'updated_at'),
            'classes': ('collapse',)
        }),
    )
