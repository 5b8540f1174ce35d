from django.contrib import admin
from .models import FitRun


@admin.register(FitRun)
class FitRunAdmin(admin.ModelAdmin):
    list_display = [
        'id', 'flavor', 'status', 'n', 'p', 'selected_lambda',
        'edf', 'flat_gcv', 'processing_time', 'created_at'
    ]
    list_filter = ['flavor', 'status', 'flat_gcv', 'created_at']
    search_fields = ['id']
    readonly_fields = ['id', 'processing_time', 'created_at', 'updated_at']

    fieldsets = (
        ('Basic Information', {
            'fields': ('id', 'flavor', 'status', 'n', 'p')
        }),
        ('Options', {
            'fields': ('options',),
            'classes': ('collapse',)
        }),
        ('Result', {
            'fields': ('selected_lambda', 'edf', 'gcv', 'rss', 'flat_gcv', 'processing_time')
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
